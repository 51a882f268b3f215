#pragma once

#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "chrum/clock.hpp"
#include "chrum/experiment.hpp"
#include "chrum/properties.hpp"
#include "chrum/storage.hpp"
#include "chrum/xml.hpp"

namespace chrum {

enum class SubmissionStatus { Recorded, Submitted, Failed };

struct SubmissionRecord {
    std::string combination;
    std::string execution_time;
    std::string application_path;
    std::string job_id;  // set iff status == Submitted
    SubmissionStatus status = SubmissionStatus::Recorded;
    std::string failure_reason;  // set iff status == Failed

    std::string status_text() const {
        switch (status) {
            case SubmissionStatus::Recorded: return "recorded";
            case SubmissionStatus::Submitted: return "submitted";
            case SubmissionStatus::Failed: return "failed(" + failure_reason + ")";
        }
        return "?";
    }
};

// Stamps EXECUTION_TIME into the combination's properties file and creates
// results/<EXECUTION_TIME>/ under its storage dir. The stamp is appended (a
// history of runs), but re-running within the same clock tick is a no-op.
// The properties write happens first: if it fails, no results directory
// appears.
inline SubmissionRecord record_execution(const ExperimentPlan& plan, std::size_t index,
                                         Storage& storage, const ClockFn& clock) {
    const ComboPaths& paths = plan.paths.at(index);
    SubmissionRecord record;
    record.combination = plan.combinations[index].label;
    record.execution_time = format_timestamp(clock());
    record.application_path = paths.storage_dir.string();

    std::string stamp_line = "EXECUTION_TIME=" + record.execution_time;
    std::string existing = storage.read_file(paths.properties_file);
    bool already_stamped = false;
    for (const std::string& line : split_lines(existing).lines)
        if (trim(line) == stamp_line) already_stamped = true;
    if (!already_stamped) {
        std::string prefix = existing.empty() || existing.back() == '\n' ? "" : "\n";
        storage.append_file(paths.properties_file, prefix + stamp_line + "\n");
    }

    storage.make_dirs(paths.storage_dir / "results" / record.execution_time);
    record.status = SubmissionStatus::Recorded;
    return record;
}

// Oozie v1 jobs API request body: the flattened properties plus the
// application path, one <property> each.
inline std::string submission_body(
    const std::vector<std::pair<std::string, std::string>>& flattened_properties,
    const std::string& application_path) {
    xml::Node configuration;
    configuration.name = "configuration";
    auto add = [&](const std::string& name, const std::string& value) {
        xml::Node property;
        property.name = "property";
        xml::Node n, v;
        n.name = "name";
        n.text = name;
        v.name = "value";
        v.text = value;
        property.children.push_back(std::move(n));
        property.children.push_back(std::move(v));
        configuration.children.push_back(std::move(property));
    };
    for (const auto& [key, value] : flattened_properties) add(key, value);
    add("oozie.wf.application.path", application_path);
    return "<?xml version='1.0' encoding='UTF-8'?>\n" + xml::to_string(configuration);
}

// POST /oozie/v1/jobs?action=start. Failure is encoded in the returned
// status, never thrown; the recorded EXECUTION_TIME is untouched either way.
inline SubmissionRecord submit(
    SubmissionRecord record, const ChrumConfig& config,
    const std::vector<std::pair<std::string, std::string>>& flattened_properties,
    int timeout_seconds = 10) {
    httplib::Client client(config.server_address, config.server_port);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);

    std::string body = submission_body(flattened_properties, record.application_path);
    httplib::Result res = client.Post("/oozie/v1/jobs?action=start", body,
                                      "application/xml;charset=UTF-8");
    if (!res) {
        record.status = SubmissionStatus::Failed;
        record.failure_reason = "connection: " + httplib::to_string(res.error());
        return record;
    }
    if (res->status != 201) {
        record.status = SubmissionStatus::Failed;
        record.failure_reason = "http " + std::to_string(res->status);
        return record;
    }
    try {
        nlohmann::json reply = nlohmann::json::parse(res->body);
        record.job_id = reply.at("id").get<std::string>();
    } catch (const std::exception&) {
        record.status = SubmissionStatus::Failed;
        record.failure_reason = "bad response body";
        return record;
    }
    record.status = SubmissionStatus::Submitted;
    return record;
}

}  // namespace chrum

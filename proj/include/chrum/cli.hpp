#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chrum/chrum.hpp"

namespace chrum {

namespace cli_detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::IoFailure, "cannot read " + path.string());
    return content;
}

inline void require_files(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths)
        if (!std::filesystem::exists(p))
            throw Error(Errc::IoFailure, "no such file: " + p.string());
}

inline int exit_code_for(const Error& e) { return is_io_error(e.code()) ? 1 : 2; }

inline ChrumConfig load_config(const std::filesystem::path& path) {
    ChrumConfig config = parse_config(read_file(path), path.string());
    if (const char* env = std::getenv("CHRUM_STORAGE_ROOT"); env && *env)
        config.storage_root = env;
    return config;
}

inline ClockFn make_clock(const std::string& clock_spec) {
    if (clock_spec.empty()) return system_clock_fn();
    return fixed_clock(parse_iso_timestamp(clock_spec));
}

}  // namespace cli_detail

struct CliPaths {
    std::string config;
    std::string template_file;
    std::string properties;
    std::string out;
    std::string clock;
    bool materialize_only = false;
    bool do_submit = false;
    int verbosity = 0;
};

inline int cmd_expand(const CliPaths& args, std::ostream& out, std::ostream& err) {
    try {
        cli_detail::require_files({args.template_file, args.properties});
        ClockFn clock = cli_detail::make_clock(args.clock);

        TemplateDocument doc =
            parse_template(cli_detail::read_file(args.template_file), args.template_file);
        PropertySet props = parse_properties(cli_detail::read_file(args.properties), args.properties);
        ReplaceTable table = build_replace_table(doc);
        IdiomRegistry idioms = IdiomRegistry::with_builtins();

        std::vector<Combination> combos = enumerate_combinations(props);
        std::map<std::string, std::string> compile_props = flattened_view(props, combos.front());
        EmittedWorkflow workflow =
            emit_workflow(doc, expand_document(doc, table, compile_props, idioms));

        std::vector<Violation> violations = validate_graph(workflow.graph);
        if (!violations.empty()) {
            for (const Violation& v : violations) err << "error: " << v.str() << "\n";
            return 2;
        }

        std::string out_path = args.out.empty() ? "workflow.xml" : args.out;
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        file << workflow.xml_text;
        if (!file) throw Error(Errc::IoFailure, "cannot write " + out_path);
        file.close();

        int template_lines = 0;
        {
            SplitLines split = split_lines(cli_detail::read_file(args.template_file));
            template_lines = count_non_blank(split.lines);
        }
        int actions = 0;
        for (const auto& [name, kind] : workflow.graph.nodes)
            if (kind == NodeKind::Action) ++actions;
        out << "template: " << args.template_file << " (" << template_lines
            << " non-blank lines)\n";
        out << "workflow: " << out_path << " (" << workflow.stats.non_blank_lines
            << " non-blank lines, " << actions << " actions)\n";
        std::ostringstream ratio;
        ratio << std::fixed << std::setprecision(1)
              << (template_lines > 0
                      ? static_cast<double>(workflow.stats.non_blank_lines) / template_lines
                      : 0.0);
        out << "expansion ratio: " << ratio.str() << "x\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return cli_detail::exit_code_for(e);
    }
}

inline int cmd_plan(const CliPaths& args, std::ostream& out, std::ostream& err) {
    try {
        cli_detail::require_files({args.config, args.template_file, args.properties});
        ClockFn clock = cli_detail::make_clock(args.clock);

        ChrumConfig config = cli_detail::load_config(args.config);
        // syntax check only; plan writes nothing and expands nothing
        parse_template(cli_detail::read_file(args.template_file), args.template_file);
        PropertySet props = parse_properties(cli_detail::read_file(args.properties), args.properties);

        std::filesystem::path local_root = args.out.empty() ? "chrum-runs" : args.out;
        ExperimentPlan plan =
            make_plan(config, props, local_root, format_timestamp(clock()));
        for (std::size_t i = 0; i < plan.combinations.size(); ++i)
            out << plan.combinations[i].label << "\t" << plan.paths[i].local_dir.string() << "\t"
                << plan.paths[i].storage_dir.string() << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return cli_detail::exit_code_for(e);
    }
}

inline int cmd_run(const CliPaths& args, std::ostream& out, std::ostream& err) {
    try {
        cli_detail::require_files({args.config, args.template_file, args.properties});
        ClockFn clock = cli_detail::make_clock(args.clock);

        ChrumConfig config = cli_detail::load_config(args.config);
        TemplateDocument doc =
            parse_template(cli_detail::read_file(args.template_file), args.template_file);
        PropertySet props = parse_properties(cli_detail::read_file(args.properties), args.properties);
        ReplaceTable table = build_replace_table(doc);
        IdiomRegistry idioms = IdiomRegistry::with_builtins();

        std::filesystem::path local_root = args.out.empty() ? "chrum-runs" : args.out;
        ExperimentPlan plan = make_plan(config, props, local_root, format_timestamp(clock()));
        LocalStorage storage;

        int failures = 0;
        for (std::size_t i = 0; i < plan.combinations.size(); ++i) {
            const std::string& label = plan.combinations[i].label;
            std::string status;
            std::string job_id = "-";
            try {
                std::map<std::string, std::string> compile_props =
                    flattened_view(props, plan.combinations[i]);
                EmittedWorkflow workflow =
                    emit_workflow(doc, expand_document(doc, table, compile_props, idioms));
                std::vector<Violation> violations = validate_graph(workflow.graph);
                if (!violations.empty())
                    throw Error(Errc::XmlMalformed,
                                "graph validation failed: " + violations.front().str());
                materialize_combination(plan, i, workflow, props, storage);
                status = "materialized";
                if (args.do_submit) {
                    SubmissionRecord record = record_execution(plan, i, storage, clock);
                    std::string flat = storage.read_file(plan.paths[i].properties_file);
                    record = submit(record, config, parse_flat_properties(flat));
                    status = record.status_text();
                    if (record.status == SubmissionStatus::Submitted) job_id = record.job_id;
                    else if (record.status == SubmissionStatus::Failed) ++failures;
                }
                if (args.verbosity > 0)
                    err << "combination " << label << ": " << status << "\n";
            } catch (const Error& e) {
                status = "failed(" + std::string(e.what()) + ")";
                ++failures;
            }
            out << label << "\t" << status << "\t" << job_id << "\n";
        }
        if (failures > 0) {
            err << failures << " of " << plan.combinations.size() << " combinations failed\n";
            return 3;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return cli_detail::exit_code_for(e);
    }
}

inline int cmd_validate(const std::string& workflow_path, std::ostream& out, std::ostream& err) {
    try {
        cli_detail::require_files({workflow_path});
        xml::Node root = xml::parse(cli_detail::read_file(workflow_path), workflow_path);
        WorkflowGraph graph = build_graph(root);
        std::vector<Violation> violations = validate_graph(graph);
        if (!violations.empty()) {
            for (const Violation& v : violations) out << v.str() << "\n";
            return 2;
        }
        out << "valid: " << graph.nodes.size() << " nodes, " << graph.action_names().size()
            << " actions\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return cli_detail::exit_code_for(e);
    }
}

inline int cmd_dry_run(const std::string& workflow_path, std::ostream& out, std::ostream& err) {
    try {
        cli_detail::require_files({workflow_path});
        xml::Node root = xml::parse(cli_detail::read_file(workflow_path), workflow_path);
        WorkflowGraph graph = build_graph(root);
        std::vector<Violation> violations = validate_graph(graph);
        if (!violations.empty()) {
            for (const Violation& v : violations) err << "error: " << v.str() << "\n";
            return 2;
        }
        for (const TraceEvent& event : dry_run(graph)) out << event.str() << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return cli_detail::exit_code_for(e);
    }
}

// Entry point shared by the chrum binary and the in-process CLI tests.
// `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chrum workflow macro-compiler and experiment manager", "chrum"};
    app.require_subcommand(1);

    CliPaths opts;
    std::string workflow_path;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config)
            cmd->add_option("--config", opts.config, "Chrum configuration file")->required();
        cmd->add_option("--template", opts.template_file, "Chrum workflow template")->required();
        cmd->add_option("--properties", opts.properties, "Oozie properties file")->required();
        cmd->add_option("--clock", opts.clock,
                        "fixed clock for COMPILATION_TIME/EXECUTION_TIME (ISO, test hook)");
        cmd->add_flag("-v,--verbose", opts.verbosity, "verbose diagnostics on stderr");
    };

    CLI::App* expand = app.add_subcommand("expand", "expand a template into workflow.xml");
    add_common(expand, false);
    expand->add_option("--out", opts.out, "output workflow file (default workflow.xml)");

    CLI::App* plan = app.add_subcommand("plan", "list combinations and target directories");
    add_common(plan, true);
    plan->add_option("--out", opts.out, "local output root (default chrum-runs)");

    CLI::App* run = app.add_subcommand("run", "materialize every combination, optionally submit");
    add_common(run, true);
    run->add_option("--out", opts.out, "local output root (default chrum-runs)");
    CLI::Option* mat_only = run->add_flag("--materialize-only", opts.materialize_only,
                                          "write directories, no submission (default)");
    run->add_flag("--submit", opts.do_submit, "record EXECUTION_TIME and submit each combination")
        ->excludes(mat_only);

    CLI::App* validate = app.add_subcommand("validate", "validate an emitted workflow.xml");
    validate->add_option("workflow", workflow_path, "workflow XML file")->required();

    CLI::App* dryrun = app.add_subcommand("dry-run", "print the success-path execution trace");
    dryrun->add_option("workflow", workflow_path, "workflow XML file")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;  // usage errors are config-class failures
    }

    if (expand->parsed()) return cmd_expand(opts, out, err);
    if (plan->parsed()) return cmd_plan(opts, out, err);
    if (run->parsed()) return cmd_run(opts, out, err);
    if (validate->parsed()) return cmd_validate(workflow_path, out, err);
    if (dryrun->parsed()) return cmd_dry_run(workflow_path, out, err);
    return 2;
}

}  // namespace chrum

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/strings.hpp"

namespace chrum {

struct FolderMapping {
    std::string name;    // folder created under each storage directory
    std::string source;  // local path whose content is copied in
};

// Experiment-manager configuration:
//   project = NAME
//   storage_root = PATH
//   scripts = PATH
//   server = HOST:PORT
//   folder NAME <- SOURCE_PATH
struct ChrumConfig {
    std::string project;
    std::string storage_root;
    std::string scripts;
    std::string server_address;
    int server_port = 0;
    std::vector<FolderMapping> folders;
};

inline ChrumConfig parse_config(std::string_view text, const std::string& source_name = "config") {
    ChrumConfig config;
    bool seen_project = false, seen_storage = false, seen_scripts = false, seen_server = false;

    SplitLines split = split_lines(text);
    for (std::size_t i = 0; i < split.lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        std::string_view line = trim(split.lines[i]);
        if (line.empty() || line.front() == '#') continue;

        if (line.starts_with("folder ") || line.starts_with("folder\t")) {
            std::string_view rest = ltrim(line.substr(6));
            std::size_t arrow = rest.find("<-");
            if (arrow == std::string_view::npos)
                throw Error(Errc::BadLine, "folder line must be 'folder NAME <- PATH'",
                            source_name, line_no);
            std::string name(trim(rest.substr(0, arrow)));
            std::string source(trim(rest.substr(arrow + 2)));
            if (name.empty() || source.empty())
                throw Error(Errc::BadLine, "folder line must be 'folder NAME <- PATH'",
                            source_name, line_no);
            for (const auto& f : config.folders)
                if (f.name == name)
                    throw Error(Errc::DuplicateKey, "folder '" + name + "' mapped twice",
                                source_name, line_no);
            config.folders.push_back({std::move(name), std::move(source)});
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::BadLine, "expected 'key = value' or 'folder NAME <- PATH'",
                        source_name, line_no);
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));

        auto set = [&](std::string& slot, bool& seen) {
            if (seen)
                throw Error(Errc::DuplicateKey, "key '" + key + "' set twice", source_name, line_no);
            seen = true;
            slot = value;
        };
        if (key == "project") {
            set(config.project, seen_project);
            if (config.project.empty() || config.project.find('/') != std::string::npos ||
                config.project.find('\\') != std::string::npos)
                throw Error(Errc::BadLine,
                            "project must be non-empty and contain no path separators",
                            source_name, line_no);
        } else if (key == "storage_root") {
            set(config.storage_root, seen_storage);
        } else if (key == "scripts") {
            set(config.scripts, seen_scripts);
        } else if (key == "server") {
            std::string server;
            set(server, seen_server);
            std::size_t colon = server.rfind(':');
            if (colon == std::string::npos || colon == 0)
                throw Error(Errc::BadPort, "server must be HOST:PORT, got '" + server + "'",
                            source_name, line_no);
            config.server_address = server.substr(0, colon);
            std::string port_text = server.substr(colon + 1);
            int port = 0;
            for (char c : port_text) {
                if (c < '0' || c > '9' || port > 65535) { port = -1; break; }
                port = port * 10 + (c - '0');
            }
            if (port_text.empty() || port <= 0 || port > 65535)
                throw Error(Errc::BadPort, "bad port '" + port_text + "'", source_name, line_no);
            config.server_port = port;
        } else {
            throw Error(Errc::UnknownKey, "unknown config key '" + key + "'", source_name, line_no);
        }
    }

    if (!seen_project) throw Error(Errc::MissingKey, "project", source_name);
    if (!seen_storage) throw Error(Errc::MissingKey, "storage_root", source_name);
    if (!seen_scripts) throw Error(Errc::MissingKey, "scripts", source_name);
    if (!seen_server) throw Error(Errc::MissingKey, "server", source_name);
    return config;
}

}  // namespace chrum

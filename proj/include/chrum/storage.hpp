#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "chrum/errors.hpp"

namespace chrum {

// Abstract store for materialized runs. The shipped implementation is a local
// directory tree standing in for HDFS; the CEM protocol is purely
// path-structural, so nothing else is needed at desk scale.
class Storage {
public:
    virtual ~Storage() = default;
    virtual void make_dirs(const std::filesystem::path& dir) = 0;
    virtual void write_file(const std::filesystem::path& path, std::string_view content) = 0;
    virtual void append_file(const std::filesystem::path& path, std::string_view content) = 0;
    virtual std::string read_file(const std::filesystem::path& path) = 0;
    virtual bool exists(const std::filesystem::path& path) = 0;
    // Copies a file into dest_dir, or a directory's content into dest_dir.
    virtual int copy_in(const std::filesystem::path& source,
                        const std::filesystem::path& dest_dir) = 0;
};

class LocalStorage final : public Storage {
public:
    void make_dirs(const std::filesystem::path& dir) override {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Error(Errc::IoFailure, "mkdir " + dir.string() + ": " + ec.message());
    }

    void write_file(const std::filesystem::path& path, std::string_view content) override {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(Errc::IoFailure, "write " + path.string());
    }

    void append_file(const std::filesystem::path& path, std::string_view content) override {
        std::ofstream out(path, std::ios::binary | std::ios::app);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error(Errc::IoFailure, "append " + path.string());
    }

    std::string read_file(const std::filesystem::path& path) override {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(Errc::IoFailure, "open " + path.string());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (in.bad()) throw Error(Errc::IoFailure, "read " + path.string());
        return content;
    }

    bool exists(const std::filesystem::path& path) override {
        std::error_code ec;
        return std::filesystem::exists(path, ec);
    }

    int copy_in(const std::filesystem::path& source, const std::filesystem::path& dest_dir) override {
        std::error_code ec;
        int files = 0;
        if (std::filesystem::is_directory(source, ec)) {
            std::filesystem::copy(source, dest_dir,
                                  std::filesystem::copy_options::recursive |
                                      std::filesystem::copy_options::overwrite_existing,
                                  ec);
            if (ec)
                throw Error(Errc::IoFailure,
                            "copy " + source.string() + " -> " + dest_dir.string() + ": " +
                                ec.message());
            for (const auto& entry : std::filesystem::recursive_directory_iterator(dest_dir))
                if (entry.is_regular_file()) ++files;
        } else {
            std::filesystem::copy_file(source, dest_dir / source.filename(),
                                       std::filesystem::copy_options::overwrite_existing, ec);
            if (ec)
                throw Error(Errc::IoFailure,
                            "copy " + source.string() + " -> " + dest_dir.string() + ": " +
                                ec.message());
            files = 1;
        }
        return files;
    }
};

}  // namespace chrum

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chrum {

// Diagnostic codes carried by Error. The CLI maps these to exit codes:
// I/O problems exit 1, template/config defects exit 2.
enum class Errc {
    // template parser
    UnterminatedBlock,
    UnexpectedEnd,
    NestedBlock,
    BadAttributes,
    UnknownBlockKind,
    // replace table / placeholder resolution
    DuplicateReplace,
    SubstitutionCycle,
    UnknownPlaceholder,
    // idioms and fork/merge axes
    ZeroStep,
    EmptyRange,
    UnknownIdiom,
    IdiomArity,
    UnresolvedPropertyInIdiom,
    NonIntegerIdiomArg,
    // workflow emission
    XmlMalformed,
    // config / properties files
    MissingKey,
    BadPort,
    DuplicateKey,
    UnknownKey,
    BadLine,
    EmptyMulti,
    KeyInBothForms,
    // filesystem / network
    IoFailure,
    SourceMissing,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::UnterminatedBlock: return "UnterminatedBlock";
        case Errc::UnexpectedEnd: return "UnexpectedEnd";
        case Errc::NestedBlock: return "NestedBlock";
        case Errc::BadAttributes: return "BadAttributes";
        case Errc::UnknownBlockKind: return "UnknownBlockKind";
        case Errc::DuplicateReplace: return "DuplicateReplace";
        case Errc::SubstitutionCycle: return "SubstitutionCycle";
        case Errc::UnknownPlaceholder: return "UnknownPlaceholder";
        case Errc::ZeroStep: return "ZeroStep";
        case Errc::EmptyRange: return "EmptyRange";
        case Errc::UnknownIdiom: return "UnknownIdiom";
        case Errc::IdiomArity: return "IdiomArity";
        case Errc::UnresolvedPropertyInIdiom: return "UnresolvedPropertyInIdiom";
        case Errc::NonIntegerIdiomArg: return "NonIntegerIdiomArg";
        case Errc::XmlMalformed: return "XmlMalformed";
        case Errc::MissingKey: return "MissingKey";
        case Errc::BadPort: return "BadPort";
        case Errc::DuplicateKey: return "DuplicateKey";
        case Errc::UnknownKey: return "UnknownKey";
        case Errc::BadLine: return "BadLine";
        case Errc::EmptyMulti: return "EmptyMulti";
        case Errc::KeyInBothForms: return "KeyInBothForms";
        case Errc::IoFailure: return "IoFailure";
        case Errc::SourceMissing: return "SourceMissing";
    }
    return "UnknownError";
}

inline bool is_io_error(Errc c) {
    return c == Errc::IoFailure || c == Errc::SourceMissing;
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::string source = {}, int line = 0)
        : std::runtime_error(format(code, message, source, line)),
          code_(code),
          source_(std::move(source)),
          line_(line) {}

    Error(Errc code, std::string message, std::vector<std::string> cycle_path)
        : std::runtime_error(format(code, message, {}, 0)),
          code_(code),
          cycle_path_(std::move(cycle_path)) {}

    Errc code() const { return code_; }
    const std::string& source() const { return source_; }
    int line() const { return line_; }

    // Placeholder name sequence for SubstitutionCycle / node sequence for graph cycles.
    const std::vector<std::string>& cycle_path() const { return cycle_path_; }

private:
    static std::string format(Errc code, const std::string& message,
                              const std::string& source, int line) {
        std::string out;
        if (!source.empty()) {
            out += source;
            if (line > 0) {
                out += ':';
                out += std::to_string(line);
            }
            out += ": ";
        }
        out += errc_name(code);
        out += ": ";
        out += message;
        return out;
    }

    Errc code_;
    std::string source_;
    int line_ = 0;
    std::vector<std::string> cycle_path_;
};

}  // namespace chrum

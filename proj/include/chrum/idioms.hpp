#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chrum/errors.hpp"

namespace chrum {

// seq(start, max, step): decimal renderings of start, start+step, ... while
// the value stays within the inclusive bound max.
inline std::vector<std::string> eval_seq(long long start, long long max, long long step) {
    if (step == 0) throw Error(Errc::ZeroStep, "seq step must not be zero");
    if ((step > 0 && start > max) || (step < 0 && start < max))
        throw Error(Errc::EmptyRange,
                    "seq(" + std::to_string(start) + "," + std::to_string(max) + "," +
                        std::to_string(step) + ") is empty");
    std::vector<std::string> out;
    for (long long v = start;; v += step) {
        out.push_back(std::to_string(v));
        // stop before v += step could overflow past max (wide arithmetic)
        __int128 next = static_cast<__int128>(v) + step;
        if (step > 0 ? next > max : next < max) break;
    }
    return out;
}

// Compile-time value-list generators usable in FORK_MERGE axis declarations.
// New idioms register under a name; lookup is exact, unknown names are errors.
class IdiomRegistry {
public:
    using Fn = std::function<std::vector<std::string>(const std::vector<long long>&)>;

    void add(std::string name, Fn fn) { idioms_[std::move(name)] = std::move(fn); }

    bool contains(const std::string& name) const { return idioms_.count(name) > 0; }

    std::vector<std::string> eval(const std::string& name,
                                  const std::vector<long long>& args) const {
        auto it = idioms_.find(name);
        if (it == idioms_.end())
            throw Error(Errc::UnknownIdiom, "unknown idiom '" + name + "'");
        return it->second(args);
    }

    static IdiomRegistry with_builtins() {
        IdiomRegistry reg;
        reg.add("seq", [](const std::vector<long long>& args) {
            if (args.size() != 3)
                throw Error(Errc::IdiomArity, "seq takes 3 arguments (start, max, step), got " +
                                                  std::to_string(args.size()));
            return eval_seq(args[0], args[1], args[2]);
        });
        return reg;
    }

private:
    std::map<std::string, Fn> idioms_;
};

}  // namespace chrum

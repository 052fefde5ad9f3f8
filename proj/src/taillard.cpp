#include "flowbb/taillard.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace flowbb {

namespace {

// Pulls whitespace-separated tokens while tracking the 1-based line each
// token came from, so errors can point at the right place in the file.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    bool next(long long& value) {
        if (!advance()) return false;
        try {
            std::size_t used = 0;
            value = std::stoll(token_, &used);
            if (used != token_.size()) throw std::invalid_argument(token_);
        } catch (const std::exception&) {
            throw ParseError("expected an integer, got '" + token_ + "'", line_);
        }
        return true;
    }

    long long require(const char* what) {
        long long value = 0;
        if (!next(value))
            throw ParseError(std::string("unexpected end of input, expected ") + what, line_);
        return value;
    }

    int line() const { return line_; }

private:
    bool advance() {
        token_.clear();
        while (true) {
            if (pos_ >= current_.size()) {
                if (!std::getline(in_, current_)) return false;
                ++line_;
                pos_ = 0;
                continue;
            }
            char c = current_[pos_];
            if (c == '#') {  // comment runs to end of line
                pos_ = current_.size();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            break;
        }
        while (pos_ < current_.size()) {
            char c = current_[pos_];
            if (c == '#' || std::isspace(static_cast<unsigned char>(c))) break;
            token_.push_back(c);
            ++pos_;
        }
        return true;
    }

    std::istream& in_;
    std::string current_;
    std::size_t pos_ = 0;
    int line_ = 0;
    std::string token_;
};

}  // namespace

std::vector<Instance> parse_taillard(std::istream& in, const std::string& source_name) {
    TokenReader reader(in);
    std::vector<Instance> instances;
    long long n = 0;
    while (reader.next(n)) {
        int header_line = reader.line();
        long long m = reader.require("machine count");
        if (n < 1 || m < 1)
            throw ParseError("job and machine counts must be positive", header_line);
        if (n > 1000 || m > 1000)
            throw ParseError("implausible instance dimensions", header_line);

        // Optional trailing header fields: seed, upper bound, lower bound.
        // They share the header line; a value on a later line belongs to
        // the matrix instead.
        long long extras[3];
        int n_extras = 0;
        long long peeked = 0;
        bool have_peek = false;
        while (n_extras < 3) {
            if (!reader.next(peeked)) break;
            if (reader.line() != header_line) {
                have_peek = true;
                break;
            }
            extras[n_extras++] = peeked;
        }

        std::vector<Time> proc(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
        for (long long machine = 0; machine < m; ++machine) {
            for (long long job = 0; job < n; ++job) {
                long long t;
                if (have_peek) {
                    t = peeked;
                    have_peek = false;
                } else {
                    t = reader.require("processing time");
                }
                if (t < 0)
                    throw ParseError("processing times must be non-negative", reader.line());
                proc[static_cast<std::size_t>(job) * m + machine] = t;
            }
        }

        Instance inst(static_cast<int>(n), static_cast<int>(m), std::move(proc), source_name);
        if (n_extras > 0) inst.file_seed = extras[0];
        if (n_extras > 1) inst.upper_bound = extras[1];
        if (n_extras > 2) inst.lower_bound = extras[2];
        instances.push_back(std::move(inst));
    }
    if (instances.empty())
        throw ParseError("no instances found in " +
                             (source_name.empty() ? std::string("input") : source_name),
                         1);
    // a lone instance keeps the bare source name; several get indexed
    if (instances.size() > 1 && !source_name.empty())
        for (std::size_t i = 0; i < instances.size(); ++i)
            instances[i].name = source_name + "[" + std::to_string(i) + "]";
    return instances;
}

std::vector<Instance> load_taillard_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::string base = path;
    if (auto slash = base.find_last_of('/'); slash != std::string::npos)
        base = base.substr(slash + 1);
    if (auto dot = base.find_last_of('.'); dot != std::string::npos && dot > 0)
        base = base.substr(0, dot);
    return parse_taillard(in, base);
}

void write_taillard(std::ostream& out, const Instance& inst) {
    out << inst.jobs << ' ' << inst.machines;
    if (inst.file_seed) {
        out << ' ' << *inst.file_seed;
        if (inst.upper_bound) {
            out << ' ' << *inst.upper_bound;
            if (inst.lower_bound) out << ' ' << *inst.lower_bound;
        }
    }
    out << '\n';
    for (int machine = 0; machine < inst.machines; ++machine) {
        for (int job = 0; job < inst.jobs; ++job) {
            if (job) out << ' ';
            out << inst.p(job, machine);
        }
        out << '\n';
    }
}

}  // namespace flowbb

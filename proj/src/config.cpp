#include "pumped/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pumped/errors.hpp"

namespace pumped {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct Entry {
    std::string value;                            // scalar value, empty for blocks
    std::vector<std::vector<double>> block;       // matrix rows
    int line = 0;
    bool is_block = false;
    bool consumed = false;
};

using Entries = std::map<std::string, Entry>;

Entries tokenize(const std::string& text) {
    Entries entries;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string pending_key;
    int pending_line = 0;

    auto flush_pending = [&]() {
        if (pending_key.empty()) return;
        if (!entries[pending_key].is_block || entries[pending_key].block.empty())
            throw ConfigError("key '" + pending_key + "' has no value", pending_line);
        pending_key.clear();
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) {
            flush_pending();
            continue;
        }

        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            flush_pending();
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("missing key before '='", line_no);
            if (entries.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
            Entry e;
            e.line = line_no;
            if (value.empty()) {
                e.is_block = true;
                entries[key] = e;
                pending_key = key;
                pending_line = line_no;
            } else {
                e.value = value;
                entries[key] = e;
            }
            continue;
        }

        if (pending_key.empty())
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        // block row: whitespace-separated numbers
        std::vector<double> row;
        std::istringstream rs(line);
        std::string tok;
        while (rs >> tok) {
            char* end = nullptr;
            const double x = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                throw ConfigError("bad number '" + tok + "' in block '" + pending_key + "'",
                                  line_no);
            row.push_back(x);
        }
        entries[pending_key].block.push_back(std::move(row));
    }
    flush_pending();
    return entries;
}

double parse_double(const Entry& e, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || e.is_block)
        throw ConfigError("key '" + key + "' expects a number, got '" + e.value + "'", e.line);
    return x;
}

class Reader {
public:
    explicit Reader(Entries entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double number(const std::string& key) {
        Entry& e = require(key);
        e.consumed = true;
        return parse_double(e, key);
    }

    double number_or(const std::string& key, double fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        it->second.consumed = true;
        return parse_double(it->second, key);
    }

    std::string word(const std::string& key, const std::string& fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        it->second.consumed = true;
        if (it->second.is_block)
            throw ConfigError("key '" + key + "' expects a word", it->second.line);
        return it->second.value;
    }

    /// rows x cols real block
    std::vector<std::vector<double>> block(const std::string& key, std::size_t rows,
                                           std::size_t cols) {
        Entry& e = require(key);
        e.consumed = true;
        if (!e.is_block)
            throw ConfigError("key '" + key + "' expects a matrix block on following lines",
                              e.line);
        if (e.block.size() != rows)
            throw ConfigError("block '" + key + "' has " + std::to_string(e.block.size()) +
                                  " rows, expected " + std::to_string(rows),
                              e.line);
        for (const auto& row : e.block)
            if (row.size() != cols)
                throw ConfigError("block '" + key + "' has a row of length " +
                                      std::to_string(row.size()) + ", expected " +
                                      std::to_string(cols),
                                  e.line);
        return e.block;
    }

    void expect_missing_or_consumed(std::vector<std::string>& unknown) const {
        for (const auto& [key, e] : entries_)
            if (!e.consumed) unknown.push_back(key);
    }

    void require_all(const std::vector<std::string>& keys) const {
        std::vector<std::string> missing;
        for (const std::string& k : keys)
            if (!has(k)) missing.push_back(k);
        if (!missing.empty()) {
            std::string msg = "missing required keys:";
            for (const std::string& k : missing) msg += " " + k;
            throw ConfigError(msg, 0);
        }
    }

private:
    Entry& require(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'", 0);
        return it->second;
    }

    Entries entries_;
};

ComplexMatrix complex_block(Reader& reader, const std::string& re_key,
                            const std::string& im_key, std::size_t rows, std::size_t cols) {
    const auto re = reader.block(re_key, rows, cols);
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = re[i][j];
    if (reader.has(im_key)) {
        const auto im = reader.block(im_key, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) += Complex(0.0, im[i][j]);
    }
    return m;
}

DensityMatrix initial_state(Reader& reader, std::size_t n) {
    const std::string kind = reader.word("init_rho", "zero");
    if (kind == "zero") return DensityMatrix(n, n);
    if (kind == "excited") {
        DensityMatrix rho(n, n);
        rho(n - 1, n - 1) = 1.0;
        return rho;
    }
    if (kind == "custom") return complex_block(reader, "init.rho.re", "init.rho.im", n, n);
    throw ConfigError("init_rho must be zero, excited or custom, got '" + kind + "'", 0);
}

}  // namespace

RunConfig parse_config(const std::string& text, const Tolerances& tols) {
    Reader reader(tokenize(text));
    RunConfig config;

    const bool explicit_mode = reader.has("n");
    if (explicit_mode) {
        reader.require_all({"n", "matrix.h.re", "matrix.r", "matrix.pump", "t_end", "samples",
                            "dt"});
        const double n_raw = reader.number("n");
        if (!(n_raw >= 1.0) || n_raw != std::floor(n_raw))
            throw ConfigError("n must be a positive integer", 0);
        const std::size_t n = static_cast<std::size_t>(n_raw);

        ModelSpec model;
        model.n = n;
        model.hamiltonian = complex_block(reader, "matrix.h.re", "matrix.h.im", n, n);
        model.relaxation =
            ExplicitRelaxation{complex_block(reader, "matrix.r", "matrix.r.im", n * n, n * n)};
        model.pump = complex_block(reader, "matrix.pump", "matrix.pump.im", n, n);
        config.model = std::move(model);
        config.rho_init = initial_state(reader, n);
    } else {
        reader.require_all({"pump_1", "pump_2", "decay_1", "decay_2", "coherence_decay",
                            "detuning", "coupling_v", "t_end", "samples", "dt"});
        TwoLevelParams p;
        p.pump_1 = reader.number("pump_1");
        p.pump_2 = reader.number("pump_2");
        p.pump_21 = Complex(reader.number_or("pump_21_re", 0.0),
                            reader.number_or("pump_21_im", 0.0));
        p.decay_1 = reader.number("decay_1");
        p.decay_2 = reader.number("decay_2");
        p.coherence_decay = reader.number("coherence_decay");
        p.detuning = reader.number("detuning");
        p.coupling = reader.number("coupling_v");
        config.two_level = p;
        config.model = to_model(p, tols);  // throws ValidationError on bad parameters
        config.rho_init = initial_state(reader, 2);
    }

    config.t_end = reader.number("t_end");
    const double samples_raw = reader.number("samples");
    config.dt = reader.number("dt");
    if (!(config.t_end > 0.0)) throw ConfigError("t_end must be positive", 0);
    if (!(samples_raw >= 2.0) || samples_raw != std::floor(samples_raw))
        throw ConfigError("samples must be an integer >= 2", 0);
    config.samples = static_cast<std::size_t>(samples_raw);
    if (!(config.dt > 0.0)) throw ConfigError("dt must be positive", 0);

    std::vector<std::string> unknown;
    reader.expect_missing_or_consumed(unknown);
    if (!unknown.empty()) {
        std::string msg = "unknown keys:";
        std::sort(unknown.begin(), unknown.end());
        for (const std::string& k : unknown) msg += " " + k;
        throw ConfigError(msg, 0);
    }

    // forward physical-constraint problems as validation errors
    const ValidationReport report = validate(config.model, tols);
    if (!report.all_passed())
        throw ValidationError("model validation failed", report.failures());
    return config;
}

RunConfig load_config(const std::string& path, const Tolerances& tols) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), tols);
}

}  // namespace pumped

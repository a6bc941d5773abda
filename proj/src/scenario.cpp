#include "rotbath/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace rotbath {

ScenarioSyntaxError::ScenarioSyntaxError(const std::string& what, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ScenarioError::ScenarioError(const std::string& key, const std::string& what)
    : Error(key + ": " + what), key_(key) {}

std::string to_string(RunKind kind) {
    switch (kind) {
        case RunKind::Rates: return "rates";
        case RunKind::Kinetics: return "kinetics";
        case RunKind::BirthDeath: return "birthdeath";
        case RunKind::Gillespie: return "gillespie";
        case RunKind::Thermo: return "thermo";
        case RunKind::Spectrum: return "spectrum";
        case RunKind::Shear: return "shear";
        case RunKind::BhLedger: return "bh-ledger";
    }
    return "unknown";
}

RunKind parse_run_kind(const std::string& text) {
    for (RunKind k : {RunKind::Rates, RunKind::Kinetics, RunKind::BirthDeath, RunKind::Gillespie,
                      RunKind::Thermo, RunKind::Spectrum, RunKind::Shear, RunKind::BhLedger})
        if (to_string(k) == text) return k;
    throw ScenarioError("run.kind", "unknown run kind '" + text + "'");
}

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

// ---------------------------------------------------------------------------
// Generic document model: [section] / key = value, values are numbers,
// integers, strings (quoted or bare words) and single-line lists of those.

struct Value {
    enum class Kind { Number, Integer, String, List } kind = Kind::Number;
    double number = 0.0;
    std::int64_t integer = 0;
    std::string text;
    std::vector<Value> items;
    std::size_t line = 0, column = 0;
};

struct Entry {
    std::string key;
    Value value;
    std::size_t line = 0, column = 0;
};

struct Section {
    std::string name;
    std::vector<Entry> entries;
    std::size_t line = 0, column = 0;
};

class LineParser {
public:
    LineParser(const std::string& text, std::size_t line) : s_(text), line_(line) {}

    void skip_space() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }
    char peek() {
        skip_space();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    std::size_t column() const { return pos_ + 1; }

    [[noreturn]] void fail(const std::string& what) const { throw ScenarioSyntaxError(what, line_, column()); }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string identifier() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '-' || s_[pos_] == '.'))
            ++pos_;
        if (pos_ == start) fail("expected a name");
        return s_.substr(start, pos_ - start);
    }

    Value value() {
        skip_space();
        Value v;
        v.line = line_;
        v.column = column();
        if (pos_ >= s_.size() || s_[pos_] == '#') fail("expected a value");
        const char c = s_[pos_];
        if (c == '[') {
            ++pos_;
            v.kind = Value::Kind::List;
            if (peek() == ']') {
                ++pos_;
                return v;
            }
            while (true) {
                Value item = value();
                if (item.kind == Value::Kind::List) fail("nested lists are not supported");
                v.items.push_back(std::move(item));
                const char next = peek();
                if (next == ',') {
                    ++pos_;
                    continue;
                }
                if (next == ']') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ']' in list");
            }
            return v;
        }
        if (c == '"') {
            ++pos_;
            v.kind = Value::Kind::String;
            while (true) {
                if (pos_ >= s_.size()) fail("unterminated string");
                const char ch = s_[pos_++];
                if (ch == '"') break;
                if (ch == '\\') {
                    if (pos_ >= s_.size()) fail("unterminated escape");
                    const char esc = s_[pos_++];
                    if (esc != '"' && esc != '\\') fail("unknown escape sequence");
                    v.text.push_back(esc);
                } else {
                    v.text.push_back(ch);
                }
            }
            return v;
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' && s_[pos_] != ' ' &&
               s_[pos_] != '\t' && s_[pos_] != '\r')
            ++pos_;
        const std::string token = s_.substr(start, pos_ - start);
        if (token.empty()) fail("expected a value");
        classify_bare(token, v);
        return v;
    }

private:
    static void classify_bare(const std::string& token, Value& v) {
        if (token == "inf" || token == "+inf") {
            v.kind = Value::Kind::Number;
            v.number = std::numeric_limits<double>::infinity();
            return;
        }
        if (token == "-inf") {
            v.kind = Value::Kind::Number;
            v.number = -std::numeric_limits<double>::infinity();
            return;
        }
        const char* first = token.data();
        const char* last = token.data() + token.size();
        const char* num = (*first == '+') ? first + 1 : first;
        const bool looks_float = token.find_first_of(".eE") != std::string::npos;
        if (!looks_float) {
            std::int64_t i = 0;
            auto [p, ec] = std::from_chars(num, last, i);
            if (ec == std::errc() && p == last) {
                v.kind = Value::Kind::Integer;
                v.integer = i;
                v.number = static_cast<double>(i);
                return;
            }
        }
        double d = 0.0;
        auto [p, ec] = std::from_chars(num, last, d);
        if (ec == std::errc() && p == last) {
            v.kind = Value::Kind::Number;
            v.number = d;
            return;
        }
        v.kind = Value::Kind::String;
        v.text = token;
    }

    const std::string& s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::vector<Section> parse_document(const std::string& text) {
    std::vector<Section> sections;
    std::set<std::string> seen_sections;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        LineParser lp(line, lineno);
        if (lp.at_end()) continue;
        if (lp.peek() == '[') {
            lp.expect('[');
            const std::size_t col = lp.column();
            std::string name = lp.identifier();
            lp.expect(']');
            if (!lp.at_end()) lp.fail("unexpected text after section header");
            if (!seen_sections.insert(name).second)
                throw ScenarioSyntaxError("duplicate section [" + name + "]", lineno, col);
            sections.push_back(Section{std::move(name), {}, lineno, col});
            continue;
        }
        const std::size_t col = lp.column();
        if (sections.empty()) throw ScenarioSyntaxError("key outside of any section", lineno, col);
        std::string key = lp.identifier();
        lp.expect('=');
        Value v = lp.value();
        if (!lp.at_end()) lp.fail("unexpected text after value");
        auto& entries = sections.back().entries;
        for (const auto& e : entries)
            if (e.key == key) throw ScenarioSyntaxError("duplicate key '" + key + "'", lineno, col);
        entries.push_back(Entry{std::move(key), std::move(v), lineno, col});
    }
    return sections;
}

// ---------------------------------------------------------------------------
// Typed access with key-naming errors.

class SectionReader {
public:
    SectionReader(const Section& s, std::set<std::string> allowed) : s_(s) {
        for (const auto& e : s.entries)
            if (!allowed.count(e.key)) throw ScenarioError(path(e.key), "unknown key");
    }

    const Entry* find(const std::string& key) const {
        for (const auto& e : s_.entries)
            if (e.key == key) return &e;
        return nullptr;
    }
    bool has(const std::string& key) const { return find(key) != nullptr; }
    std::string path(const std::string& key) const { return s_.name + "." + key; }

    double number(const std::string& key, double fallback) const {
        const Entry* e = find(key);
        return e ? as_number(key, e->value) : fallback;
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        const Entry* e = find(key);
        return e ? as_integer(key, e->value) : fallback;
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        const Entry* e = find(key);
        return e ? as_text(key, e->value) : fallback;
    }
    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        if (const Entry* e = find(key))
            for (const auto& v : as_list(key, e->value)) out.push_back(as_number(key, v));
        return out;
    }
    std::vector<std::int64_t> integers(const std::string& key) const {
        std::vector<std::int64_t> out;
        if (const Entry* e = find(key))
            for (const auto& v : as_list(key, e->value)) out.push_back(as_integer(key, v));
        return out;
    }
    std::vector<std::string> texts(const std::string& key) const {
        std::vector<std::string> out;
        if (const Entry* e = find(key))
            for (const auto& v : as_list(key, e->value)) out.push_back(as_text(key, v));
        return out;
    }

private:
    double as_number(const std::string& key, const Value& v) const {
        if (v.kind == Value::Kind::Number || v.kind == Value::Kind::Integer) return v.number;
        if (v.kind == Value::Kind::String && v.text == "inf") return std::numeric_limits<double>::infinity();
        throw ScenarioError(path(key), "expected a number");
    }
    std::int64_t as_integer(const std::string& key, const Value& v) const {
        if (v.kind == Value::Kind::Integer) return v.integer;
        throw ScenarioError(path(key), "expected an integer");
    }
    std::string as_text(const std::string& key, const Value& v) const {
        if (v.kind == Value::Kind::String) return v.text;
        throw ScenarioError(path(key), "expected a string");
    }
    std::vector<Value> as_list(const std::string&, const Value& v) const {
        if (v.kind == Value::Kind::List) return v.items;
        return {v};  // a scalar reads as a one-element list
    }

    const Section& s_;
};

int narrow_int(const SectionReader& r, const std::string& key, std::int64_t v) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ScenarioError(r.path(key), "integer out of range");
    return static_cast<int>(v);
}

SpectrumFamily parse_family(const std::string& text) {
    for (SpectrumFamily f : {SpectrumFamily::Ohmic, SpectrumFamily::Flat, SpectrumFamily::HawkingFormFactor,
                             SpectrumFamily::FromCorrelation})
        if (to_string(f) == text) return f;
    throw ScenarioError("bath.family", "unknown spectrum family '" + text + "'");
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ScenarioError(key, what);
}

BathParams read_bath(const Section& s) {
    SectionReader r(s, {"family", "amplitude", "exponent", "cutoff", "level", "correlation_file", "beta",
                        "omega_rot"});
    BathParams b;
    b.family = parse_family(r.text("family", "ohmic"));
    b.amplitude = r.number("amplitude", b.amplitude);
    b.exponent = r.number("exponent", b.exponent);
    b.cutoff = r.number("cutoff", b.cutoff);
    b.level = r.number("level", b.level);
    b.correlation_file = r.text("correlation_file", "");
    b.beta = r.number("beta", b.beta);
    b.omega_rot = r.number("omega_rot", b.omega_rot);

    require(b.beta > 0.0 && !std::isnan(b.beta), "bath.beta", "must be > 0 or inf");
    require(b.omega_rot >= 0.0 && std::isfinite(b.omega_rot), "bath.omega_rot", "must be finite and >= 0");
    for (auto [key, v] : {std::pair{"amplitude", b.amplitude}, {"exponent", b.exponent}, {"cutoff", b.cutoff},
                          {"level", b.level}})
        require(v > 0.0 && std::isfinite(v), std::string("bath.") + key, "must be finite and > 0");
    if (b.family == SpectrumFamily::FromCorrelation)
        require(!b.correlation_file.empty(), "bath.correlation_file", "required for the correlation family");
    return b;
}

ModesParams read_modes(const Section& s) {
    SectionReader r(s, {"omega", "m", "alpha", "statistics", "omega_min", "omega_max", "omega_steps", "m_min",
                        "m_max"});
    ModesParams p;
    for (const auto& st : r.texts("statistics")) {
        try {
            p.statistics.push_back(parse_statistics(st));
        } catch (const DomainError& e) {
            throw ScenarioError("modes.statistics", e.what());
        }
    }
    if (p.statistics.empty()) p.statistics.push_back(Statistics::Bose);

    const bool explicit_list = r.has("omega") || r.has("m") || r.has("alpha");
    const bool grid = r.has("omega_min") || r.has("omega_max") || r.has("omega_steps") || r.has("m_min") ||
                      r.has("m_max");
    require(explicit_list != grid, "modes", "give either explicit omega/m lists or a grid, not both or neither");

    if (explicit_list) {
        p.omega = r.numbers("omega");
        for (auto m : r.integers("m")) p.m.push_back(narrow_int(r, "m", m));
        p.alpha = r.texts("alpha");
        require(!p.omega.empty(), "modes.omega", "at least one mode required");
        require(p.m.size() == p.omega.size(), "modes.m", "must have one entry per omega");
        if (p.alpha.empty()) p.alpha.assign(p.omega.size(), "0");
        require(p.alpha.size() == p.omega.size(), "modes.alpha", "must have one entry per omega");
        require(p.statistics.size() == 1 || p.statistics.size() == p.omega.size(), "modes.statistics",
                "must be a single value or one per mode");
        for (double w : p.omega) require(w >= 0.0 && std::isfinite(w), "modes.omega", "energies must be >= 0");
    } else {
        ModeGrid g;
        g.omega_min = r.number("omega_min", g.omega_min);
        g.omega_max = r.number("omega_max", g.omega_max);
        g.omega_steps = narrow_int(r, "omega_steps", r.integer("omega_steps", g.omega_steps));
        g.m_min = narrow_int(r, "m_min", r.integer("m_min", g.m_min));
        g.m_max = narrow_int(r, "m_max", r.integer("m_max", g.m_max));
        require(g.omega_min >= 0.0 && std::isfinite(g.omega_min), "modes.omega_min", "must be >= 0");
        require(g.omega_max >= g.omega_min && std::isfinite(g.omega_max), "modes.omega_max",
                "must be >= omega_min");
        require(g.omega_steps >= 1, "modes.omega_steps", "must be >= 1");
        require(g.m_max >= g.m_min, "modes.m_max", "must be >= m_min");
        require(p.statistics.size() == 1, "modes.statistics", "grids take a single statistics value");
        p.grid = g;
    }
    return p;
}

RunParams read_run(const Section& s, const ParseOverrides& overrides) {
    SectionReader r(s, {"kind", "t_max", "points", "n_traj", "seed", "kappa", "tail_tol", "ceiling", "n0",
                        "initial"});
    RunParams p;
    require(r.has("kind"), "run.kind", "missing");
    p.kind = parse_run_kind(r.text("kind", ""));
    p.t_max = r.number("t_max", p.t_max);
    p.points = narrow_int(r, "points", r.integer("points", p.points));
    p.n_traj = r.integer("n_traj", p.n_traj);
    if (r.has("seed")) {
        const auto seed = r.integer("seed", 0);
        require(seed >= 0, "run.seed", "must be >= 0");
        p.seed = static_cast<std::uint64_t>(seed);
    }
    if (overrides.seed) p.seed = overrides.seed;
    p.kappa = r.number("kappa", p.kappa);
    p.tail_tol = r.number("tail_tol", p.tail_tol);
    p.ceiling = r.number("ceiling", p.ceiling);
    p.n0 = r.number("n0", p.n0);
    const std::string initial = r.text("initial", "point");
    require(initial == "point" || initial == "thermal", "run.initial", "must be point or thermal");
    p.initial = initial == "point" ? InitialState::Point : InitialState::Thermal;

    require(p.t_max > 0.0 && std::isfinite(p.t_max), "run.t_max", "must be finite and > 0");
    require(p.points >= 2, "run.points", "must be >= 2");
    require(p.n_traj >= 1, "run.n_traj", "must be >= 1");
    require(p.kappa >= 0.0 && std::isfinite(p.kappa), "run.kappa", "must be finite and >= 0");
    require(p.tail_tol > 0.0 && p.tail_tol < 1.0, "run.tail_tol", "must lie in (0, 1)");
    require(p.ceiling > 0.0, "run.ceiling", "must be > 0");
    require(p.n0 >= 0.0 && std::isfinite(p.n0), "run.n0", "must be finite and >= 0");
    if (p.kind == RunKind::Gillespie) require(p.seed.has_value(), "run.seed", "mandatory for gillespie runs");
    const bool integral_start = p.kind == RunKind::Gillespie ||
                                ((p.kind == RunKind::BirthDeath || p.kind == RunKind::Thermo) &&
                                 p.initial == InitialState::Point);
    if (integral_start) require(p.n0 == std::floor(p.n0), "run.n0", "must be an integer occupation number");
    return p;
}

ShearParams read_shear(const Section& s) {
    SectionReader r(s, {"V", "v", "k"});
    ShearParams p;
    p.V = r.number("V", p.V);
    p.v = r.number("v", p.v);
    p.k = r.number("k", p.k);
    for (auto [key, val] : {std::pair{"V", p.V}, {"v", p.v}, {"k", p.k}})
        require(val > 0.0 && std::isfinite(val), std::string("shear.") + key, "must be finite and > 0");
    return p;
}

BhParams read_bh(const Section& s) {
    SectionReader r(s, {"t_hawking", "omega_horizon", "omega", "m", "count"});
    BhParams p;
    p.t_hawking = r.number("t_hawking", p.t_hawking);
    p.omega_horizon = r.number("omega_horizon", p.omega_horizon);
    p.omega = r.numbers("omega");
    for (auto m : r.integers("m")) p.m.push_back(narrow_int(r, "m", m));
    p.count = r.numbers("count");
    if (p.count.empty()) p.count.assign(p.omega.size(), 1.0);
    require(p.t_hawking > 0.0 && std::isfinite(p.t_hawking), "bh.t_hawking", "must be finite and > 0");
    require(std::isfinite(p.omega_horizon), "bh.omega_horizon", "must be finite");
    require(p.m.size() == p.omega.size(), "bh.m", "must have one entry per omega");
    require(p.count.size() == p.omega.size(), "bh.count", "must have one entry per omega");
    for (double c : p.count) require(c >= 0.0, "bh.count", "counts must be >= 0");
    return p;
}

OutputParams read_output(const Section& s) {
    SectionReader r(s, {"dir", "format"});
    OutputParams p;
    p.dir = r.text("dir", p.dir);
    p.format = r.text("format", p.format);
    require(p.format == "csv", "output.format", "only csv is supported");
    return p;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

template <class T, class F>
std::string list(const std::vector<T>& xs, F&& fmt) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt(xs[i]);
    }
    return out + "]";
}

}  // namespace

Scenario parse_scenario(const std::string& text, const ParseOverrides& overrides) {
    const auto sections = parse_document(text);
    Scenario s;
    bool has_run = false;
    for (const auto& sec : sections) {
        if (sec.name == "bath") {
            s.bath = read_bath(sec);
        } else if (sec.name == "modes") {
            s.modes = read_modes(sec);
        } else if (sec.name == "run") {
            s.run = read_run(sec, overrides);
            has_run = true;
        } else if (sec.name == "shear") {
            s.shear = read_shear(sec);
        } else if (sec.name == "bh") {
            s.bh = read_bh(sec);
        } else if (sec.name == "output") {
            s.output = read_output(sec);
        } else {
            throw ScenarioError(sec.name, "unknown section");
        }
    }
    require(has_run, "run", "missing [run] section");

    switch (s.run.kind) {
        case RunKind::Shear:
            require(s.shear.has_value(), "shear", "shear runs need a [shear] section");
            break;
        case RunKind::BhLedger:
            require(s.bh.has_value(), "bh", "bh-ledger runs need a [bh] section");
            break;
        default:
            require(s.bath.has_value(), "bath", to_string(s.run.kind) + " runs need a [bath] section");
            require(s.modes.has_value(), "modes", to_string(s.run.kind) + " runs need a [modes] section");
            break;
    }
    if (s.modes && s.run.n0 > 1.0) {
        for (Statistics st : s.modes->statistics)
            require(st == Statistics::Bose, "run.n0", "fermion occupation cannot exceed 1");
    }
    if (s.run.kind == RunKind::Thermo && s.bath)
        require(std::isfinite(s.bath->beta), "bath.beta", "thermo runs need a finite beta");
    return s;
}

Scenario read_scenario_file(const std::string& path, const ParseOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), overrides);
}

std::string print_scenario(const Scenario& s) {
    std::ostringstream out;
    auto num = [](double x) { return format_double(x); };
    if (s.bath) {
        const auto& b = *s.bath;
        out << "[bath]\n"
            << "family = " << to_string(b.family) << "\n"
            << "amplitude = " << num(b.amplitude) << "\n"
            << "exponent = " << num(b.exponent) << "\n"
            << "cutoff = " << num(b.cutoff) << "\n"
            << "level = " << num(b.level) << "\n"
            << "correlation_file = " << quote(b.correlation_file) << "\n"
            << "beta = " << num(b.beta) << "\n"
            << "omega_rot = " << num(b.omega_rot) << "\n\n";
    }
    if (s.modes) {
        const auto& m = *s.modes;
        out << "[modes]\n";
        auto stat = [](Statistics st) { return to_string(st); };
        if (m.statistics.size() == 1)
            out << "statistics = " << stat(m.statistics.front()) << "\n";
        else
            out << "statistics = " << list(m.statistics, stat) << "\n";
        if (m.grid) {
            out << "omega_min = " << num(m.grid->omega_min) << "\n"
                << "omega_max = " << num(m.grid->omega_max) << "\n"
                << "omega_steps = " << m.grid->omega_steps << "\n"
                << "m_min = " << m.grid->m_min << "\n"
                << "m_max = " << m.grid->m_max << "\n";
        } else {
            out << "omega = " << list(m.omega, num) << "\n"
                << "m = " << list(m.m, [](int v) { return std::to_string(v); }) << "\n"
                << "alpha = " << list(m.alpha, quote) << "\n";
        }
        out << "\n";
    }
    const auto& r = s.run;
    out << "[run]\n"
        << "kind = " << to_string(r.kind) << "\n"
        << "t_max = " << num(r.t_max) << "\n"
        << "points = " << r.points << "\n"
        << "n_traj = " << r.n_traj << "\n";
    if (r.seed) out << "seed = " << *r.seed << "\n";
    out << "kappa = " << num(r.kappa) << "\n"
        << "tail_tol = " << num(r.tail_tol) << "\n"
        << "ceiling = " << num(r.ceiling) << "\n"
        << "n0 = " << num(r.n0) << "\n"
        << "initial = " << (r.initial == InitialState::Point ? "point" : "thermal") << "\n\n";
    if (s.shear) {
        out << "[shear]\n"
            << "V = " << num(s.shear->V) << "\n"
            << "v = " << num(s.shear->v) << "\n"
            << "k = " << num(s.shear->k) << "\n\n";
    }
    if (s.bh) {
        out << "[bh]\n"
            << "t_hawking = " << num(s.bh->t_hawking) << "\n"
            << "omega_horizon = " << num(s.bh->omega_horizon) << "\n"
            << "omega = " << list(s.bh->omega, num) << "\n"
            << "m = " << list(s.bh->m, [](int v) { return std::to_string(v); }) << "\n"
            << "count = " << list(s.bh->count, num) << "\n\n";
    }
    out << "[output]\n"
        << "dir = " << quote(s.output.dir) << "\n"
        << "format = " << s.output.format << "\n";
    return out.str();
}

BathSpec make_bath(const BathParams& p, const std::string& base_dir) {
    const InverseTemperature beta = InverseTemperature::from_double(p.beta);
    switch (p.family) {
        case SpectrumFamily::Ohmic:
            return BathSpec(beta, p.omega_rot, ohmic_spectrum(p.amplitude, p.exponent, p.cutoff, beta));
        case SpectrumFamily::Flat:
            return BathSpec(beta, p.omega_rot, flat_spectrum(p.level, beta));
        case SpectrumFamily::HawkingFormFactor: {
            const double level = p.level;
            return BathSpec(beta, p.omega_rot, hawking_spectrum([level](double) { return level; }, beta));
        }
        case SpectrumFamily::FromCorrelation: {
            std::filesystem::path path(p.correlation_file);
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            return BathSpec(beta, p.omega_rot, correlation_spectrum(read_correlation_file(path.string()), beta));
        }
        case SpectrumFamily::Custom: break;
    }
    throw ScenarioError("bath.family", "custom spectra cannot be built from a scenario");
}

std::vector<Mode> make_modes(const ModesParams& p) {
    std::vector<Mode> modes;
    if (p.grid) {
        const auto& g = *p.grid;
        for (int i = 0; i < g.omega_steps; ++i) {
            const double w = g.omega_steps == 1
                                 ? g.omega_min
                                 : g.omega_min + (g.omega_max - g.omega_min) * i / (g.omega_steps - 1);
            for (int m = g.m_min; m <= g.m_max; ++m) modes.emplace_back(w, m, "0", p.statistics.front());
        }
    } else {
        for (std::size_t i = 0; i < p.omega.size(); ++i) {
            const Statistics st = p.statistics.size() == 1 ? p.statistics.front() : p.statistics[i];
            modes.emplace_back(p.omega[i], p.m[i], p.alpha[i], st);
        }
    }
    std::stable_sort(modes.begin(), modes.end());
    return modes;
}

}  // namespace rotbath

#include "geit/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "geit/errors.hpp"
#include "geit/io.hpp"

namespace geit {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

struct Token {
    std::string text;
    int line = 0;
    int column = 0;  // 1-based column of the first character
};

double to_double(const Token& tok) {
    double v = 0.0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw ParseError("invalid number '" + tok.text + "'", tok.line, tok.column);
    return v;
}

long long to_integer(const Token& tok) {
    long long v = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw ParseError("invalid integer '" + tok.text + "'", tok.line, tok.column);
    return v;
}

int to_int(const Token& tok) {
    long long v = to_integer(tok);
    if (v < INT32_MIN || v > INT32_MAX)
        throw ParseError("integer out of range '" + tok.text + "'", tok.line, tok.column);
    return static_cast<int>(v);
}

bool to_bool(const Token& tok) {
    if (tok.text == "true" || tok.text == "1") return true;
    if (tok.text == "false" || tok.text == "0") return false;
    throw ParseError("invalid boolean '" + tok.text + "' (expected true/false)", tok.line,
                     tok.column);
}

// Applies one key=value pair to the config; throws ParseError for unknown keys.
void apply(RunConfig& c, const std::string& section, const Token& key, const Token& value) {
    auto unknown_key = [&]() -> ParseError {
        return ParseError("unknown key '" + key.text + "' in section [" + section + "]", key.line,
                          key.column);
    };

    if (section == "atom") {
        auto& a = c.params.atom;
        if (key.text == "omega_21") a.omega_21 = to_double(value);
        else if (key.text == "omega_31") a.omega_31 = to_double(value);
        else if (key.text == "gamma_2") a.gamma_2 = to_double(value);
        else if (key.text == "gamma_3") a.gamma_3 = to_double(value);
        else if (key.text == "gamma_2_phi") a.gamma_2_phi = to_double(value);
        else if (key.text == "gamma_3_phi") a.gamma_3_phi = to_double(value);
        else if (key.text == "gamma_31") a.gamma_31 = to_double(value);
        else if (key.text == "gamma_32") a.gamma_32 = to_double(value);
        else throw unknown_key();
    } else if (section == "coupling_a") {
        auto& ca = c.params.coupling_a;
        if (key.text == "n_points") ca.n_points = to_int(value);
        else if (key.text == "tau") ca.tau = to_double(value);
        else if (key.text == "gamma_31") ca.gamma_31 = to_double(value);
        else if (key.text == "phi") ca.phi = to_double(value);
        else if (key.text == "v_g") c.params.v_g = to_double(value);
        else throw unknown_key();
    } else if (section == "coupling_b") {
        auto& cb = c.params.coupling_b;
        if (key.text == "m_points") cb.m_points = to_int(value);
        else if (key.text == "tau_tilde") cb.tau_tilde = to_double(value);
        else if (key.text == "gamma_21") cb.gamma_21 = to_double(value);
        else if (key.text == "omega_beta") cb.omega_beta = to_double(value);
        else if (key.text == "v_g") c.params.v_g_tilde = to_double(value);
        else throw unknown_key();
    } else if (section == "drive") {
        auto& d = c.params.drive;
        if (key.text == "omega_c_re") d.omega_c.real(to_double(value));
        else if (key.text == "omega_c_im") d.omega_c.imag(to_double(value));
        else if (key.text == "delta_32") d.delta_32 = to_double(value);
        else throw unknown_key();
    } else if (section == "probe") {
        if (key.text == "omega_p") c.params.probe.omega_p = to_double(value);
        else if (key.text == "delta_31") c.params.probe.delta_31 = to_double(value);
        else if (key.text == "delta_min") c.grid.min = to_double(value);
        else if (key.text == "delta_max") c.grid.max = to_double(value);
        else if (key.text == "delta_count") c.grid.count = to_int(value);
        else throw unknown_key();
    } else if (section == "dde") {
        auto& d = c.dde;
        if (key.text == "dt") d.dt = to_double(value);
        else if (key.text == "t_final") d.t_final = to_double(value);
        else if (key.text == "initial_level") d.initial_level = to_int(value);
        else if (key.text == "feed_history") d.feed_history = to_bool(value);
        else if (key.text == "demod_window") d.demod_window = to_double(value);
        else if (key.text == "demod_tol") d.demod_tol = to_double(value);
        else if (key.text == "output_stride") d.output_stride = to_int(value);
        else throw unknown_key();
    } else if (section == "numerics") {
        if (key.text == "epsilon") c.params.epsilon = to_double(value);
        else throw unknown_key();
    } else if (section == "output") {
        if (key.text == "dir") c.output.dir = value.text;
        else if (key.text == "basename") c.output.basename = value.text;
        else throw unknown_key();
    } else if (section == "run") {
        if (key.text == "task") c.task = value.text;
        else throw unknown_key();
    } else {
        // Section names are checked where the header is parsed; reaching this
        // branch would mean the dispatch above is out of sync with it.
        throw ParseError("unknown section [" + section + "]", key.line, key.column);
    }
}

bool known_section(const std::string& name) {
    return name == "atom" || name == "coupling_a" || name == "coupling_b" || name == "drive" ||
           name == "probe" || name == "dde" || name == "numerics" || name == "output" ||
           name == "run";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::string section;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;  // blank
        int col0 = static_cast<int>(first) + 1;
        char head = line[first];
        if (head == '#' || head == ';') continue;  // comment

        if (head == '[') {
            auto close = line.find(']', first);
            if (close == std::string_view::npos)
                throw ParseError("unterminated section header", line_no, col0);
            auto tail = trim(line.substr(close + 1));
            if (!tail.empty() && tail.front() != '#' && tail.front() != ';')
                throw ParseError("trailing characters after section header", line_no,
                                 static_cast<int>(close) + 2);
            std::string name(trim(line.substr(first + 1, close - first - 1)));
            if (!known_section(name))
                throw ParseError("unknown section [" + name + "]", line_no, col0 + 1);
            section = name;
            continue;
        }

        auto eq = line.find('=', first);
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no, col0);
        if (section.empty())
            throw ParseError("key outside of any section", line_no, col0);

        std::string_view key_sv = trim(line.substr(first, eq - first));
        if (key_sv.empty())
            throw ParseError("missing key before '='", line_no, col0);
        std::string_view rest = line.substr(eq + 1);
        // Strip a trailing comment, then whitespace.
        auto hash = rest.find_first_of("#;");
        if (hash != std::string_view::npos) rest = rest.substr(0, hash);
        std::string_view value_sv = trim(rest);
        int value_col = static_cast<int>(eq) + 2;
        if (!value_sv.empty())
            value_col = static_cast<int>(value_sv.data() - line.data()) + 1;
        if (value_sv.empty())
            throw ParseError("missing value for key '" + std::string(key_sv) + "'", line_no,
                             value_col);

        Token key{std::string(key_sv), line_no, col0};
        Token value{std::string(value_sv), line_no, value_col};
        apply(c, section, key, value);
    }

    c.params.validate();
    c.grid.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& v) { out << key << " = " << v << "\n"; };
    auto kd = [&](const char* key, double v) { kv(key, format_double(v)); };
    auto ki = [&](const char* key, long long v) { kv(key, std::to_string(v)); };
    auto kb = [&](const char* key, bool v) { kv(key, v ? "true" : "false"); };

    const auto& p = c.params;
    out << "# giant-atom transport run configuration\n";
    out << "[atom]\n";
    kd("omega_21", p.atom.omega_21);
    kd("omega_31", p.atom.omega_31);
    kd("gamma_2", p.atom.gamma_2);
    kd("gamma_3", p.atom.gamma_3);
    kd("gamma_2_phi", p.atom.gamma_2_phi);
    kd("gamma_3_phi", p.atom.gamma_3_phi);
    kd("gamma_31", p.atom.gamma_31);
    kd("gamma_32", p.atom.gamma_32);

    out << "\n[coupling_a]\n";
    ki("n_points", p.coupling_a.n_points);
    kd("tau", p.coupling_a.tau);
    kd("gamma_31", p.coupling_a.gamma_31);
    if (p.coupling_a.phi) kd("phi", *p.coupling_a.phi);
    kd("v_g", p.v_g);

    out << "\n[coupling_b]\n";
    ki("m_points", p.coupling_b.m_points);
    kd("tau_tilde", p.coupling_b.tau_tilde);
    kd("gamma_21", p.coupling_b.gamma_21);
    if (p.coupling_b.omega_beta) kd("omega_beta", *p.coupling_b.omega_beta);
    kd("v_g", p.v_g_tilde);

    out << "\n[drive]\n";
    kd("omega_c_re", p.drive.omega_c.real());
    kd("omega_c_im", p.drive.omega_c.imag());
    kd("delta_32", p.drive.delta_32);

    out << "\n[probe]\n";
    kd("omega_p", p.probe.omega_p);
    kd("delta_31", p.probe.delta_31);
    kd("delta_min", c.grid.min);
    kd("delta_max", c.grid.max);
    ki("delta_count", c.grid.count);

    out << "\n[dde]\n";
    kd("dt", c.dde.dt);
    kd("t_final", c.dde.t_final);
    ki("initial_level", c.dde.initial_level);
    kb("feed_history", c.dde.feed_history);
    kd("demod_window", c.dde.demod_window);
    kd("demod_tol", c.dde.demod_tol);
    ki("output_stride", c.dde.output_stride);

    out << "\n[numerics]\n";
    kd("epsilon", p.epsilon);

    if (!c.output.dir.empty() || !c.output.basename.empty()) {
        out << "\n[output]\n";
        if (!c.output.dir.empty()) kv("dir", c.output.dir);
        if (!c.output.basename.empty()) kv("basename", c.output.basename);
    }
    if (!c.task.empty()) {
        out << "\n[run]\n";
        kv("task", c.task);
    }
    return out.str();
}

}  // namespace geit

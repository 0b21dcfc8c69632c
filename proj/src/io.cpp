#include "otlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

json parse_checked(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) +
                         ": JSON parse error: " + e.what());
    }
}

[[noreturn]] void fail(const std::string& origin, const std::string& path, const std::string& msg) {
    throw InputError(origin + ": " + path + ": " + msg);
}

double num_at(const json& j, const std::string& origin, const std::string& path) {
    if (!j.is_number()) fail(origin, path, "expected a number");
    return j.get<double>();
}

} // namespace

Measure1D parse_measure_json(const std::string& text, const std::string& origin) {
    json j = parse_checked(text, origin);
    if (!j.is_object()) fail(origin, "$", "expected an object with \"atoms\"/\"segments\"");
    std::vector<Atom> atoms;
    std::vector<Segment> segments;
    if (j.contains("atoms")) {
        const json& arr = j["atoms"];
        if (!arr.is_array()) fail(origin, "atoms", "expected an array of [x, mass] pairs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "atoms[" + std::to_string(i) + "]";
            if (!arr[i].is_array() || arr[i].size() != 2) fail(origin, path, "expected [x, mass]");
            double x = num_at(arr[i][0], origin, path + "[0]");
            double m = num_at(arr[i][1], origin, path + "[1]");
            if (!(m > 0.0)) fail(origin, path, "mass must be > 0");
            atoms.push_back({x, m});
        }
    }
    if (j.contains("segments")) {
        const json& arr = j["segments"];
        if (!arr.is_array()) fail(origin, "segments", "expected an array of [a, b, mass] triples");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "segments[" + std::to_string(i) + "]";
            if (!arr[i].is_array() || arr[i].size() != 3) fail(origin, path, "expected [a, b, mass]");
            double a = num_at(arr[i][0], origin, path + "[0]");
            double b = num_at(arr[i][1], origin, path + "[1]");
            double m = num_at(arr[i][2], origin, path + "[2]");
            if (!(a < b)) fail(origin, path, "needs left < right");
            if (!(m > 0.0)) fail(origin, path, "mass must be > 0");
            segments.push_back({a, b, m});
        }
    }
    for (const auto& key : j.items()) {
        if (key.key() != "atoms" && key.key() != "segments")
            fail(origin, key.key(), "unknown key in measure spec");
    }
    try {
        return Measure1D(std::move(atoms), std::move(segments));
    } catch (const InputError& e) {
        fail(origin, "$", e.what());
    }
}

Measure1D read_measure_json(const std::filesystem::path& file) {
    return parse_measure_json(slurp(file), file.string());
}

namespace {

CantorSpec cantor_from_json(const json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("alpha")) fail(origin, "$", "expected {\"alpha\": {...}, \"depth\": N}");
    const json& a = j["alpha"];
    if (!a.is_object() || !a.contains("kind")) fail(origin, "alpha", "expected {\"kind\": ...}");
    std::string kind = a["kind"].is_string() ? a["kind"].get<std::string>() : "";
    int depth_limit = 26;
    if (j.contains("depth_limit")) {
        if (!j["depth_limit"].is_number_integer()) fail(origin, "depth_limit", "expected an integer");
        depth_limit = j["depth_limit"].get<int>();
    }
    try {
        if (kind == "constant") {
            if (!a.contains("c")) fail(origin, "alpha", "constant rule needs \"c\"");
            return CantorSpec::constant(num_at(a["c"], origin, "alpha.c"), depth_limit);
        }
        if (kind == "harmonic") {
            if (!a.contains("c")) fail(origin, "alpha", "harmonic rule needs \"c\"");
            return CantorSpec::harmonic(num_at(a["c"], origin, "alpha.c"), depth_limit);
        }
        if (kind == "vector") {
            if (!a.contains("values") || !a["values"].is_array())
                fail(origin, "alpha", "vector rule needs \"values\" array");
            std::vector<double> vals;
            for (std::size_t i = 0; i < a["values"].size(); ++i)
                vals.push_back(num_at(a["values"][i], origin, "alpha.values[" + std::to_string(i) + "]"));
            return CantorSpec::vector(std::move(vals), depth_limit);
        }
    } catch (const InputError& e) {
        fail(origin, "alpha", e.what());
    }
    fail(origin, "alpha.kind", "must be one of constant|vector|harmonic");
}

} // namespace

CantorSpec parse_cantor_json(const std::string& text, const std::string& origin) {
    return cantor_from_json(parse_checked(text, origin), origin);
}

CantorSpec read_cantor_json(const std::filesystem::path& file) {
    return parse_cantor_json(slurp(file), file.string());
}

int cantor_json_depth(const std::string& text, const std::string& origin) {
    json j = parse_checked(text, origin);
    if (!j.is_object() || !j.contains("depth") || !j["depth"].is_number_integer())
        fail(origin, "depth", "expected an integer depth");
    return j["depth"].get<int>();
}

MeasureField parse_field_json(const std::string& text, const std::string& origin) {
    json j = parse_checked(text, origin);
    if (!j.is_object() || !j.contains("fibers") || !j["fibers"].is_array())
        fail(origin, "$", "expected {\"fibers\": [...]}");
    std::vector<Fiber> fibers;
    const json& arr = j["fibers"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "fibers[" + std::to_string(i) + "]";
        const json& f = arr[i];
        if (!f.is_object() || !f.contains("x") || !f.contains("w") || !f.contains("fiber"))
            fail(origin, path, "expected {\"x\":..., \"w\":..., \"fiber\": [[v,p],...]}");
        Fiber fiber;
        fiber.x = num_at(f["x"], origin, path + ".x");
        fiber.weight = num_at(f["w"], origin, path + ".w");
        if (!f["fiber"].is_array()) fail(origin, path + ".fiber", "expected an array");
        for (std::size_t k = 0; k < f["fiber"].size(); ++k) {
            const std::string ep = path + ".fiber[" + std::to_string(k) + "]";
            const json& e = f["fiber"][k];
            if (!e.is_array() || e.size() != 2) fail(origin, ep, "expected [v, p]");
            fiber.dist.push_back({num_at(e[0], origin, ep + "[0]"), num_at(e[1], origin, ep + "[1]")});
        }
        fibers.push_back(std::move(fiber));
    }
    try {
        return MeasureField(std::move(fibers));
    } catch (const InputError& e) {
        fail(origin, "fibers", e.what());
    }
}

MeasureField read_field_json(const std::filesystem::path& file) {
    return parse_field_json(slurp(file), file.string());
}

IntervalSet parse_intervals_json(const std::string& text, const std::string& origin) {
    json j = parse_checked(text, origin);
    if (!j.is_object() || !j.contains("intervals") || !j["intervals"].is_array())
        fail(origin, "$", "expected {\"intervals\": [[a,b],...]}");
    std::vector<IntervalSet::Interval> ivs;
    const json& arr = j["intervals"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "intervals[" + std::to_string(i) + "]";
        if (!arr[i].is_array() || arr[i].size() != 2) fail(origin, path, "expected [a, b]");
        ivs.emplace_back(num_at(arr[i][0], origin, path + "[0]"),
                         num_at(arr[i][1], origin, path + "[1]"));
    }
    try {
        return IntervalSet(std::move(ivs));
    } catch (const InputError& e) {
        fail(origin, "intervals", e.what());
    }
}

IntervalSet read_intervals_json(const std::filesystem::path& file) {
    return parse_intervals_json(slurp(file), file.string());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t config_hash(const std::string& canonical_config) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_config) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

CsvWriter::CsvWriter(std::vector<std::string> columns, std::string manifest)
    : columns_(std::move(columns)), manifest_(std::move(manifest)) {}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw InputError("CSV row arity mismatch");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    lines_.push_back(std::move(line));
}

void CsvWriter::add_comment(const std::string& line) { lines_.push_back("# " + line); }

std::string CsvWriter::str() const {
    std::string out = "# " + manifest_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const auto& l : lines_) {
        out += l;
        out += '\n';
    }
    return out;
}

void CsvWriter::write(const std::filesystem::path& file) const {
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << str();
    }
    std::filesystem::rename(tmp, file);
}

} // namespace otlab

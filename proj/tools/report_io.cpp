#include "report_io.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

namespace heckelab::cli {

using nlohmann::json;

namespace {

Source source_from_tag(const std::string& t) {
    if (t == "reference") return Source::Reference;
    if (t == "trivial") return Source::Trivial;
    if (t == "derived") return Source::Derived;
    throw std::invalid_argument("unknown source tag '" + t + "'");
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
        out += keep ? c : '_';
    }
    return out.empty() ? "table" : out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << body;
    if (!out) throw std::runtime_error("write failed on " + path.string());
}

}  // namespace

json to_json(const VerificationReport& r, const std::string& version) {
    json j;
    j["suite"] = r.suite;
    j["version"] = version;
    j["pass"] = r.pass();
    j["failures"] = r.failures();
    j["wall_seconds"] = r.wall_seconds;
    j["cache_hits"] = r.cache_hits;
    j["params"] = json::array();
    for (const auto& [k, v] : r.params) j["params"].push_back({{"name", k}, {"value", v}});
    j["checks"] = json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"expected", c.expected},
                               {"actual", c.actual},
                               {"source", source_tag(c.source)},
                               {"anchor", c.anchor},
                               {"pass", c.pass}});
    j["tables"] = json::array();
    for (const auto& t : r.tables) j["tables"].push_back({{"name", t.name}, {"header", t.header}, {"rows", t.rows}});
    j["notes"] = r.notes;
    return j;
}

VerificationReport from_json(const json& j) {
    VerificationReport r;
    r.suite = j.at("suite").get<std::string>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.cache_hits = j.at("cache_hits").get<std::uint64_t>();
    for (const auto& p : j.at("params")) r.params.emplace_back(p.at("name").get<std::string>(), p.at("value").get<std::string>());
    for (const auto& c : j.at("checks"))
        r.checks.push_back(Check{c.at("name").get<std::string>(), c.at("expected").get<std::string>(),
                                 c.at("actual").get<std::string>(), source_from_tag(c.at("source").get<std::string>()),
                                 c.at("anchor").get<std::string>(), c.at("pass").get<bool>()});
    for (const auto& t : j.at("tables"))
        r.tables.push_back(Table{t.at("name").get<std::string>(), t.at("header").get<std::vector<std::string>>(),
                                 t.at("rows").get<std::vector<std::vector<std::string>>>()});
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::filesystem::path> write_tables_csv(const VerificationReport& r, const std::filesystem::path& json_path) {
    std::vector<std::filesystem::path> written;
    std::map<std::string, int> seen;
    for (const auto& t : r.tables) {
        std::string name = sanitize(t.name);
        if (int n = seen[name]++; n > 0) name += "_" + std::to_string(n);
        std::filesystem::path path = json_path;
        path.replace_filename(json_path.stem().string() + "." + name + ".csv");
        std::string body;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) body += (i ? "," : "") + csv_escape(cells[i]);
            body += "\n";
        };
        line(t.header);
        for (const auto& row : t.rows) line(row);
        write_file(path, body);
        written.push_back(path);
    }
    return written;
}

void write_report(const VerificationReport& r, const std::filesystem::path& json_path, const std::string& version) {
    if (json_path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(json_path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create " + json_path.parent_path().string() + ": " + ec.message());
    }
    write_file(json_path, to_json(r, version).dump(2) + "\n");
    write_tables_csv(r, json_path);
}

}  // namespace heckelab::cli

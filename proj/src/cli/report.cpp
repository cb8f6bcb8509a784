#include "epsnet/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace epsnet::cli {

namespace {

// RFC 4180 quoting when needed
std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string value(const json& v) {
    if (v.is_null()) return "";
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
}

}  // namespace

std::string render(const Report& r, const std::string& format) {
    if (format == "json") return r.doc.dump(2) + "\n";
    if (format != "csv") throw Error("unknown report format '" + format + "'");
    std::string out = "check,k,eps,value\n";
    for (const auto& rec : r.doc["records"]) {
        const std::string id = rec["id"].get<std::string>();
        for (const auto& s : rec["samples"]) {
            const std::string label = s["label"].get<std::string>();
            const std::string name = cell(label.empty() ? id : id + ":" + label);
            for (std::size_t i = 0; i < s["k"].size(); ++i)
                out += name + "," + std::to_string(s["k"][i].get<int>()) + "," + value(s["eps"][i]) + "," + value(s["values"][i]) + "\n";
        }
    }
    return out;
}

void emit_report(const Report& r, const std::string& path, const std::string& format) {
    const std::string text = render(r, format);
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write report to " + path);
    f << text;
}

}  // namespace epsnet::cli

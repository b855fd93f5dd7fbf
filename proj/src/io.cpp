#include "chainprop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chainprop {

std::string sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15e", x);
    return buf;
}

void CsvWriter::comment(std::string_view key, std::string_view value) {
    out_ << "# " << key << ": " << value << "\n";
}

void CsvWriter::cells(std::initializer_list<std::string> parts) {
    bool first = true;
    for (const auto& p : parts) {
        if (!first) out_ << ",";
        out_ << p;
        first = false;
    }
    out_ << "\n";
}

namespace {

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

SourceProfile read_source_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open source profile: " + path);

    SourceProfile profile;
    bool kind_seen = false;
    std::string line;
    while (std::getline(in, line)) {
        line = trimmed(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            const std::string key = trimmed(line.substr(1, colon - 1));
            const std::string value = trimmed(line.substr(colon + 1));
            if (key == "kind") {
                kind_seen = true;
                if (value == "site")
                    profile.kind = SourceProfile::Kind::site;
                else if (value == "position")
                    profile.kind = SourceProfile::Kind::position;
                else if (value == "wavenumber")
                    profile.kind = SourceProfile::Kind::wavenumber;
                else
                    throw std::runtime_error("unknown source kind: " + value);
            } else if (key == "length") {
                profile.length_L = std::stod(value);
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("source rows need label,value: " + line);
        const std::string label = trimmed(line.substr(0, comma));
        const std::string value_text = trimmed(line.substr(comma + 1));
        try {
            size_t used = 0;
            const double value = std::stod(value_text, &used);
            if (used != value_text.size()) throw std::invalid_argument(value_text);
            profile.labels.push_back(label);
            profile.values.push_back(value);
        } catch (const std::invalid_argument&) {
            // header row
            continue;
        }
    }
    if (!kind_seen) throw std::runtime_error("source profile is missing '# kind:'");
    if (profile.values.empty()) throw std::runtime_error("source profile has no data rows");
    return profile;
}

}  // namespace chainprop

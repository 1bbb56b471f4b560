#include "uloc/config.hpp"

#include <fstream>
#include <sstream>

namespace uloc {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

Config Config::parse(const std::string& text)
{
    Config cfg;
    cfg.text_ = text;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw Error("config line without '=': " + t);
        cfg.sections_[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return cfg;
}

Config Config::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw Error("cannot open config " + path);
    std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse(all);
}

bool Config::has(const std::string& section, const std::string& key) const
{
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const
{
    if (!has(section, key)) throw Error("missing config key [" + section + "] " + key);
    return sections_.at(section).at(key);
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const
{
    return has(section, key) ? sections_.at(section).at(key) : fallback;
}

double Config::getDouble(const std::string& section, const std::string& key, double fallback) const
{
    if (!has(section, key)) return fallback;
    return std::strtod(get(section, key).c_str(), nullptr);
}

long Config::getInt(const std::string& section, const std::string& key, long fallback) const
{
    if (!has(section, key)) return fallback;
    return std::strtol(get(section, key).c_str(), nullptr, 10);
}

std::vector<std::string> Config::keys(const std::string& section) const
{
    std::vector<std::string> out;
    const auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& [k, v] : it->second) out.push_back(k);
    return out;
}

GridSpec parse_grid_flag(const std::string& flag)
{
    std::vector<AxisSpec> axes;
    std::istringstream is(flag);
    std::string axisPart;
    while (std::getline(is, axisPart, ';')) {
        std::istringstream as(axisPart);
        std::string nStr, hStr, xStr;
        if (!std::getline(as, nStr, ',') || !std::getline(as, hStr, ',') ||
            !std::getline(as, xStr, ','))
            throw Error("grid flag must be n,h,x0[;n,h,x0]");
        axes.push_back(AxisSpec{static_cast<std::size_t>(std::strtoul(nStr.c_str(), nullptr, 10)),
                                std::strtod(hStr.c_str(), nullptr),
                                std::strtod(xStr.c_str(), nullptr)});
    }
    return GridSpec(axes);
}

SetFlag parse_set_flag(const std::string& flag)
{
    const auto colon = flag.find(':');
    if (colon == std::string::npos) throw Error("set flag must be kind:numbers");
    SetFlag out;
    out.kind = flag.substr(0, colon);
    if (out.kind != "box" && out.kind != "ball") throw Error("set kind must be box or ball");
    std::istringstream is(flag.substr(colon + 1));
    std::string item;
    while (std::getline(is, item, ','))
        out.numbers.push_back(std::strtod(item.c_str(), nullptr));
    return out;
}

} // namespace uloc

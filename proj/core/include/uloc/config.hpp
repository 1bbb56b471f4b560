// Flat key/value configuration files with one level of [section] headers.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uloc/grid.hpp"

namespace uloc {

class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double getDouble(const std::string& section, const std::string& key, double fallback) const;
    long getInt(const std::string& section, const std::string& key, long fallback) const;
    std::vector<std::string> keys(const std::string& section) const;

    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Parses "n,h,x0[;n,h,x0]" into a grid (axis 0 first).
GridSpec parse_grid_flag(const std::string& flag);

/// Parses "box:lo0,hi0[,lo1,hi1]" or "ball:c0[,c1],r" into a set description.
struct SetFlag {
    std::string kind; // box | ball
    std::vector<double> numbers;
};
SetFlag parse_set_flag(const std::string& flag);

} // namespace uloc

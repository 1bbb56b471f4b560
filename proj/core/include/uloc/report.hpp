// Structured audit reports with JSON / CSV / SVG emission, and the UFC1
// binary container for sampled-function systems.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uloc/system.hpp"

namespace uloc {

struct AuditScalar {
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct AuditTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct AuditReport {
    std::string auditName;
    std::string inputsDigest;
    std::map<std::string, AuditScalar> scalars; // ordered keys for stable output
    std::vector<AuditTable> tables;
    std::map<std::string, double> empiricalConstants;
    std::string timestamp; // ISO-8601, empty means "omit"

    bool allPass() const;
    void addScalar(const std::string& name, double value, double tolerance, bool pass);
};

/// FNV-1a content hash rendered as 16 hex digits.
std::string content_digest(const std::string& payload);

/// Stable-key-order JSON (UTF-8).
std::string report_to_json(const AuditReport& report);
AuditReport report_from_json(const std::string& json);

/// CSV with '.' decimal and 17 significant digits; one file per table.
std::string table_to_csv(const AuditTable& table);
std::string scalars_to_csv(const AuditReport& report);

/// Static SVG bar chart of one column (no external renderer).
std::string bars_to_svg(const std::string& title, const std::vector<double>& values,
                        double hline = 0.0);

/// Atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& contents);

// --- UFC1 container ----------------------------------------------------------------

struct ContainerInfo {
    GridSpec grid;
    Domain domain = Domain::Time;
    std::size_t members = 0;
    std::string provenance;
};

/// Binary layout: text header (magic "UFC1", dimension, per-axis n/h/x0 as hex
/// floats, domain tag, member count, provenance line, "end"), then payload of
/// little-endian doubles, re/im interleaved, members concatenated row-major.
void save_container(const std::string& path, const std::vector<SampledFunction>& members,
                    const std::string& provenance);
std::pair<ContainerInfo, std::vector<SampledFunction>> load_container(const std::string& path);

} // namespace uloc

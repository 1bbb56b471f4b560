#include "uloc/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace uloc {

namespace {

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_hex(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

} // namespace

bool AuditReport::allPass() const
{
    for (const auto& [name, s] : scalars)
        if (!s.pass) return false;
    return true;
}

void AuditReport::addScalar(const std::string& name, double value, double tolerance, bool pass)
{
    scalars[name] = AuditScalar{value, tolerance, pass};
}

std::string content_digest(const std::string& payload)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string report_to_json(const AuditReport& r)
{
    nlohmann::ordered_json j;
    j["auditName"] = r.auditName;
    j["inputsDigest"] = r.inputsDigest;
    if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
    nlohmann::ordered_json scalars;
    for (const auto& [name, s] : r.scalars) {
        scalars[name] = {{"value", s.value}, {"tolerance", s.tolerance}, {"pass", s.pass}};
    }
    j["scalars"] = std::move(scalars);
    nlohmann::ordered_json consts;
    for (const auto& [name, v] : r.empiricalConstants) consts[name] = v;
    j["empiricalConstants"] = std::move(consts);
    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const AuditTable& t : r.tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = t.rows;
        tables.push_back(std::move(jt));
    }
    j["tables"] = std::move(tables);
    j["allPass"] = r.allPass();
    return j.dump(2) + "\n";
}

AuditReport report_from_json(const std::string& json)
{
    const auto j = nlohmann::json::parse(json);
    AuditReport r;
    r.auditName = j.value("auditName", "");
    r.inputsDigest = j.value("inputsDigest", "");
    r.timestamp = j.value("timestamp", "");
    if (j.contains("scalars")) {
        for (const auto& [name, s] : j.at("scalars").items()) {
            r.scalars[name] = AuditScalar{s.value("value", 0.0), s.value("tolerance", 0.0),
                                          s.value("pass", true)};
        }
    }
    if (j.contains("empiricalConstants")) {
        for (const auto& [name, v] : j.at("empiricalConstants").items())
            r.empiricalConstants[name] = v.get<double>();
    }
    if (j.contains("tables")) {
        for (const auto& jt : j.at("tables")) {
            AuditTable t;
            t.name = jt.value("name", "");
            t.columns = jt.value("columns", std::vector<std::string>{});
            t.rows = jt.value("rows", std::vector<std::vector<double>>{});
            r.tables.push_back(std::move(t));
        }
    }
    return r;
}

std::string table_to_csv(const AuditTable& t)
{
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) os << ',';
        os << t.columns[c];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << fmt17(row[c]);
        }
        os << '\n';
    }
    return os.str();
}

std::string scalars_to_csv(const AuditReport& r)
{
    std::ostringstream os;
    os << "name,value,tolerance,pass\n";
    for (const auto& [name, s] : r.scalars)
        os << name << ',' << fmt17(s.value) << ',' << fmt17(s.tolerance) << ','
           << (s.pass ? 1 : 0) << '\n';
    return os.str();
}

std::string bars_to_svg(const std::string& title, const std::vector<double>& values, double hline)
{
    const int width = 640, height = 360, margin = 40;
    double lo = 0.0, hi = 1e-12;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    hi = std::max(hi, hline);
    lo = std::min(lo, hline);
    const double span = hi - lo;
    auto ypix = [&](double v) {
        return height - margin - (v - lo) / span * (height - 2 * margin);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n";
    os << "<text x=\"" << margin << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << ypix(0.0) << "\" x2=\"" << width - margin
       << "\" y2=\"" << ypix(0.0) << "\" stroke=\"black\"/>\n";
    if (hline != 0.0)
        os << "<line x1=\"" << margin << "\" y1=\"" << ypix(hline) << "\" x2=\"" << width - margin
           << "\" y2=\"" << ypix(hline) << "\" stroke=\"red\" stroke-dasharray=\"4\"/>\n";
    const double barw = static_cast<double>(width - 2 * margin) / std::max<std::size_t>(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = margin + static_cast<double>(i) * barw;
        const double y0 = ypix(std::max(values[i], 0.0));
        const double y1 = ypix(std::min(values[i], 0.0));
        os << "<rect x=\"" << x + 1 << "\" y=\"" << y0 << "\" width=\"" << std::max(barw - 2.0, 1.0)
           << "\" height=\"" << std::max(y1 - y0, 0.5) << "\" fill=\"steelblue\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& contents)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp + " for writing");
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!os) throw Error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot rename " + tmp + " to " + path);
}

void save_container(const std::string& path, const std::vector<SampledFunction>& members,
                    const std::string& provenance)
{
    if (members.empty()) throw Error("container needs at least one member");
    const GridSpec& g = members.front().grid();
    for (const SampledFunction& f : members)
        if (!(f.grid() == g) || f.domain() != members.front().domain())
            throw GridMismatchError("container members must share grid and domain");

    std::ostringstream os;
    os << "UFC1\n";
    os << "dim " << g.dim() << "\n";
    for (int m = 0; m < g.dim(); ++m) {
        os << "axis " << m << " n " << g.axis(m).n << " h " << fmt_hex(g.axis(m).h) << " x0 "
           << fmt_hex(g.axis(m).x0) << "\n";
    }
    os << "domain " << (members.front().domain() == Domain::Time ? "time" : "frequency") << "\n";
    os << "members " << members.size() << "\n";
    os << "provenance " << provenance << "\n";
    os << "end\n";
    std::string out = os.str();

    const std::size_t n = g.size();
    std::string payload;
    payload.resize(members.size() * n * 16);
    std::size_t off = 0;
    for (const SampledFunction& f : members) {
        for (std::size_t i = 0; i < n; ++i) {
            const double re = f[i].real(), im = f[i].imag();
            std::memcpy(payload.data() + off, &re, 8);
            std::memcpy(payload.data() + off + 8, &im, 8);
            off += 16;
        }
    }
    write_file_atomic(path, out + payload);
}

std::pair<ContainerInfo, std::vector<SampledFunction>> load_container(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open container " + path);
    std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

    std::istringstream header(all);
    std::string line;
    if (!std::getline(header, line) || line != "UFC1") throw Error("bad container magic");

    int dim = 0;
    std::vector<AxisSpec> axes;
    Domain domain = Domain::Time;
    std::size_t memberCount = 0;
    std::string provenance;
    std::size_t headerEnd = 0;

    while (std::getline(header, line)) {
        if (line == "end") {
            headerEnd = static_cast<std::size_t>(header.tellg());
            break;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dim") {
            ls >> dim;
        } else if (key == "axis") {
            int idx;
            std::string kn, kh, kx;
            std::size_t n;
            std::string hs, xs;
            ls >> idx >> kn >> n >> kh >> hs >> kx >> xs;
            axes.push_back(AxisSpec{n, std::strtod(hs.c_str(), nullptr), std::strtod(xs.c_str(), nullptr)});
        } else if (key == "domain") {
            std::string d;
            ls >> d;
            domain = (d == "frequency") ? Domain::Frequency : Domain::Time;
        } else if (key == "members") {
            ls >> memberCount;
        } else if (key == "provenance") {
            std::getline(ls, provenance);
            if (!provenance.empty() && provenance.front() == ' ') provenance.erase(0, 1);
        } else {
            throw Error("unknown container header key: " + key);
        }
    }
    if (headerEnd == 0 || static_cast<int>(axes.size()) != dim || memberCount == 0)
        throw Error("malformed container header");

    GridSpec grid(axes);
    const std::size_t n = grid.size();
    if (all.size() != headerEnd + memberCount * n * 16)
        throw Error("container payload length mismatch");

    std::vector<SampledFunction> members;
    members.reserve(memberCount);
    std::size_t off = headerEnd;
    for (std::size_t m = 0; m < memberCount; ++m) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            double re, im;
            std::memcpy(&re, all.data() + off, 8);
            std::memcpy(&im, all.data() + off + 8, 8);
            v[i] = cplx(re, im);
            off += 16;
        }
        members.emplace_back(grid, domain, std::move(v));
    }
    ContainerInfo info{grid, domain, memberCount, provenance};
    return {std::move(info), std::move(members)};
}

} // namespace uloc

// Command-line front end: Hermite tables, localization audits, basis
// constructions, the annihilating-function solver, dyadic moment scans, and
// report re-rendering.
//
// Exit codes: 0 all audits pass, 1 audit failure (report still written),
// 2 usage or malformed configuration, 3 resource / truncation limits.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "uloc/completion.hpp"
#include "uloc/config.hpp"
#include "uloc/fourier.hpp"
#include "uloc/functionals.hpp"
#include "uloc/hermite.hpp"
#include "uloc/localization.hpp"
#include "uloc/report.hpp"

using namespace uloc;

namespace {

constexpr double kPi = std::numbers::pi;

std::string now_iso8601()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::string in_dir(const std::string& dir, const std::string& name)
{
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

std::string samples_digest(const std::vector<SampledFunction>& members, const std::string& salt)
{
    std::string payload = salt;
    for (const SampledFunction& f : members) {
        const char* raw = reinterpret_cast<const char*>(f.samples().data());
        payload.append(raw, raw + f.size() * sizeof(cplx));
    }
    return content_digest(payload);
}

MeasurableSet set_from_flag(const std::string& flag, int dim)
{
    const SetFlag sf = parse_set_flag(flag);
    if (sf.kind == "box") {
        if (dim == 1 && sf.numbers.size() == 2)
            return MeasurableSet::box({sf.numbers[0], 0.0}, {sf.numbers[1], 0.0});
        if (dim == 2 && sf.numbers.size() == 4)
            return MeasurableSet::box({sf.numbers[0], sf.numbers[2]},
                                      {sf.numbers[1], sf.numbers[3]});
        throw Error("box flag needs 2 numbers in d=1 or 4 in d=2");
    }
    if (dim == 1 && sf.numbers.size() == 2)
        return MeasurableSet::ball({sf.numbers[0], 0.0}, sf.numbers[1]);
    if (dim == 2 && sf.numbers.size() == 3)
        return MeasurableSet::ball({sf.numbers[0], sf.numbers[1]}, sf.numbers[2]);
    throw Error("ball flag needs center coordinates plus a radius");
}

std::vector<SampledFunction> hermite_members(int count, const GridSpec& grid)
{
    std::vector<SampledFunction> out;
    for (int k = 0; k < count; ++k) {
        SampledFunction h = hermite_function(k, grid);
        h.normalize();
        out.push_back(std::move(h));
    }
    return out;
}

SampledFunction seeded_probe(const GridSpec& g, std::mt19937_64& eng, double centerSpread,
                             double widthLo, double widthHi, const Point& centerBase = {0, 0})
{
    auto uniform = [&eng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
    };
    const int d = g.dim();
    Point c{centerBase[0] + uniform(-centerSpread, centerSpread),
            d == 2 ? centerBase[1] + uniform(-centerSpread, centerSpread) : 0.0};
    const double w = uniform(widthLo, widthHi);
    PointFn fn = [c, w, d](const Point& x) -> cplx {
        double v = 1.0;
        for (int m = 0; m < d; ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            const double u = (x[mm] - c[mm]) / w;
            if (std::abs(u) >= 1.0) return 0.0;
            v *= std::exp(-1.0 / (1.0 - u * u));
        }
        return v;
    };
    SampledFunction f = SampledFunction::fromFunction(g, Domain::Time, fn);
    f.normalize();
    return f;
}

int run_hermite(int maxK, const std::string& gridFlag, const std::string& outDir)
{
    const GridSpec grid = gridFlag.empty() ? default_grid(1) : parse_grid_flag(gridFlag);

    AuditReport report;
    report.auditName = "hermite-dispersion";
    report.timestamp = now_iso8601();

    AuditTable table{"dispersion", {"k", "delta_numeric", "delta_analytic", "rel_error"}, {}};
    double worstRel = 0.0;
    for (int k = 0; k <= maxK; ++k) {
        SampledFunction hk = hermite_function(k, grid);
        hk.normalize();
        const double num = dispersion(hk);
        const double ana = std::sqrt((2.0 * k + 1.0) / (4.0 * kPi));
        const double rel = std::abs(num - ana) / ana;
        worstRel = std::max(worstRel, rel);
        table.rows.push_back({static_cast<double>(k), num, ana, rel});
    }
    report.tables.push_back(table);
    report.addScalar("dispersionWorstRel", worstRel, 1e-6, worstRel <= 1e-6);

    AuditTable md{"mean_dispersion_sum", {"n", "numeric", "analytic", "rel_error"}, {}};
    double mdWorst = 0.0;
    for (int n = 0; n <= std::min(maxK, 8); ++n) {
        const auto s = mean_dispersion_sum(n, grid);
        const double rel = std::abs(s.numeric - s.analytic) / s.analytic;
        mdWorst = std::max(mdWorst, rel);
        md.rows.push_back({static_cast<double>(n), s.numeric, s.analytic, rel});
    }
    report.tables.push_back(md);
    report.addScalar("meanDispersionWorstRel", mdWorst, 1e-6, mdWorst <= 1e-6);

    report.inputsDigest = content_digest("hermite maxK=" + std::to_string(maxK));
    write_file_atomic(in_dir(outDir, "dispersion_table.csv"), table_to_csv(table));
    write_file_atomic(in_dir(outDir, "mean_dispersion.csv"), table_to_csv(md));
    write_file_atomic(in_dir(outDir, "hermite_report.json"), report_to_json(report));
    return report.allPass() ? 0 : 1;
}

int run_localize(const std::string& configPath)
{
    const Config cfg = Config::load(configPath);
    const std::string source = cfg.get("system", "source", "hermite");
    const std::string outJson = cfg.get("output", "json", "localize_report.json");
    const std::string outCsv = cfg.get("output", "csv", "localize_report.csv");
    const std::string outSvg = cfg.get("output", "svg", "localize_rayleigh.svg");

    std::vector<SampledFunction> members;
    if (source == "hermite") {
        const GridSpec grid = cfg.has("grid", "spec") ? parse_grid_flag(cfg.get("grid", "spec"))
                                                      : default_grid(1);
        members = hermite_members(static_cast<int>(cfg.getInt("system", "count", 4)), grid);
    } else {
        auto [info, loaded] = load_container(source);
        members = std::move(loaded);
    }
    OrthonormalSystem system(std::move(members), 1e-6);
    const int dim = system.grid().dim();

    const MeasurableSet T = set_from_flag(cfg.get("sets", "T"), dim);
    const MeasurableSet W = set_from_flag(cfg.get("sets", "W"), dim);
    const ConcentrationAudit audit = localization_audit(system, T, W);

    AuditReport report;
    report.auditName = "localization";
    report.timestamp = now_iso8601();
    report.inputsDigest = samples_digest(system.members(), cfg.get("sets", "T") + cfg.get("sets", "W"));
    report.addScalar("lhsSum", audit.lhsSum, audit.bound + 1e-8, audit.lhsSum <= audit.bound + 1e-8);
    report.addScalar("bound", audit.bound, 0.0, true);
    report.addScalar("rayleighSum", audit.rayleighSum, audit.traceDiscrete + 1e-6,
                     audit.rayleighSum <= audit.traceDiscrete + 1e-6);
    report.addScalar("traceDiscrete", audit.traceDiscrete, 0.0, true);

    AuditTable perMember{"per_member", {"n", "a", "b", "rayleigh"}, {}};
    std::vector<double> rayleigh;
    for (std::size_t n = 0; n < audit.perMember.size(); ++n) {
        const auto& pm = audit.perMember[n];
        perMember.rows.push_back({static_cast<double>(n), pm.a, pm.b, pm.rayleigh});
        rayleigh.push_back(pm.rayleigh);
    }
    report.tables.push_back(perMember);

    write_file_atomic(outJson, report_to_json(report));
    write_file_atomic(outCsv, table_to_csv(perMember));
    write_file_atomic(outSvg, bars_to_svg("per-member rayleigh quotients", rayleigh, 1.0));
    return report.allPass() ? 0 : 1;
}

int run_build(const std::string& configPath)
{
    const Config cfg = Config::load(configPath);
    const std::string construction = cfg.get("build", "construction");
    const GridSpec grid = parse_grid_flag(cfg.get("grid", "spec"));
    const std::string outContainer = cfg.get("output", "container", "system.ufc1");
    const std::string outReport = cfg.get("output", "report", "build_report.json");
    const long seed = cfg.getInt("build", "seed", 1);
    const int d = grid.dim();

    std::mt19937_64 eng(static_cast<std::uint64_t>(seed));
    AuditReport report;
    report.auditName = "build-" + construction;
    report.timestamp = now_iso8601();

    std::vector<SampledFunction> members;

    if (construction == "dyadic") {
        SampledFunction mother = dyadic_mother(grid);
        const int nLo = static_cast<int>(cfg.getInt("build", "nLo", -2));
        const int nHi = static_cast<int>(cfg.getInt("build", "nHi", 2));
        OrthonormalSystem sys = dyadic_example(mother, nLo, nHi);
        report.addScalar("gramOffDiagonal", sys.gramAudit().maxOffDiagonal, 1e-8, true);
        members = sys.members();
    } else if (construction == "homogeneous") {
        std::array<double, 2> alpha{cfg.getDouble("build", "alpha1", 1.0),
                                    cfg.getDouble("build", "alpha2", 1.0)};
        const int jMax = static_cast<int>(cfg.getInt("build", "jMax", 4));
        SampledFunction mother = cube_mother(grid);
        auto [sys, audit] = homogeneous_family(alpha, mother, jMax, grid);
        report.addScalar("weightedBoundMax",
                         *std::max_element(audit.timeWeighted.begin(), audit.timeWeighted.end()),
                         audit.timeBound + 1e-6, audit.pass);
        report.addScalar("freqSpread", audit.freqSpread, 0.02, audit.freqSpread <= 0.02);
        AuditTable t{"weighted", {"j", "time_weighted", "freq_weighted"}, {}};
        for (std::size_t j = 0; j < audit.timeWeighted.size(); ++j)
            t.rows.push_back({static_cast<double>(j), audit.timeWeighted[j], audit.freqWeighted[j]});
        report.tables.push_back(t);
        members = sys.members();
    } else {
        CompletionOptions opt;
        opt.d = d;
        opt.memberBudget = static_cast<std::size_t>(cfg.getInt("build", "budget", 256));
        opt.maxInnerSteps = static_cast<int>(cfg.getInt("build", "maxInnerSteps", 2));
        const int probeCount = static_cast<int>(cfg.getInt("build", "probes", 2));
        {
            std::istringstream is(cfg.get("build", "schedule", ""));
            std::string item;
            while (std::getline(is, item, ','))
                if (!item.empty()) opt.schedule.push_back(std::atoi(item.c_str()));
        }

        std::vector<SampledFunction> probes;
        std::pair<OrthonormalSystem, CompletionReport> result = [&] {
            if (construction == "caseI") {
                opt.p = cfg.getDouble("build", "p", d == 1 ? 0.5 : 1.0);
                opt.theta = cfg.getDouble("build", "theta", 0.25);
                for (int k = 0; k < probeCount; ++k)
                    probes.push_back(seeded_probe(grid, eng, 0.8, 1.8, 2.6));
                return complete_basis_caseI(probes, opt, grid);
            }
            if (construction == "caseII") {
                opt.p = static_cast<double>(d);
                for (int k = 0; k < probeCount; ++k)
                    probes.push_back(seeded_probe(grid, eng, 0.5, 2.0, 3.0));
                return complete_basis_caseII(probes, opt, grid);
            }
            if (construction == "even") {
                probes.push_back(seeded_probe(grid, eng, 0.05, 0.85, 0.95));
                for (int k = 1; k < probeCount; ++k)
                    probes.push_back(seeded_probe(grid, eng, 0.1, 0.7, 0.85, {1.8, 1.8}));
                return build_even_family(probes, opt, grid);
            }
            throw Error("unknown construction: " + construction);
        }();

        const CompletionReport& rep = result.second;
        report.addScalar("gramOffDiagonal", rep.gramMaxOffDiagonal, 1e-8,
                         rep.gramMaxOffDiagonal <= 1e-8);
        report.addScalar("supProduct", rep.supProduct, 0.0, true);
        report.addScalar("productSpread", rep.productSpread, 2.0, rep.productSpread <= 2.0);
        report.addScalar("certified", rep.certified ? 1.0 : 0.0, 0.0, rep.certified);
        if (construction == "caseII" || construction == "even") {
            report.addScalar("doublePathMax", rep.doublePathMax, 1e-10, rep.doublePathMax <= 1e-10);
            report.empiricalConstants["bEmp"] = rep.bEmp;
            report.empiricalConstants["thetaMin"] = rep.thetaMin;
            report.empiricalConstants["thetaMax"] = rep.thetaMax;
        }
        AuditTable probeTable{"probes", {"k", "projection", "certificate"}, {}};
        for (std::size_t k = 0; k < rep.probeProjection.size(); ++k)
            probeTable.rows.push_back(
                {static_cast<double>(k), rep.probeProjection[k], rep.certificates[k]});
        report.tables.push_back(probeTable);
        AuditTable blocks{"blocks", {"s", "theta", "members", "identityResidual", "productMax"}, {}};
        for (const BlockAudit& b : rep.blocks)
            blocks.rows.push_back({static_cast<double>(b.s), b.theta,
                                   static_cast<double>(b.members), b.identityResidual,
                                   b.productMax});
        report.tables.push_back(blocks);
        AuditTable shiftTable{"member_shifts", {"n", "shift0", "shift1"}, {}};
        for (std::size_t n = 0; n < rep.memberShifts.size(); ++n)
            shiftTable.rows.push_back(
                {static_cast<double>(n), rep.memberShifts[n][0], rep.memberShifts[n][1]});
        report.tables.push_back(shiftTable);
        members = result.first.members();
    }

    const std::string digest = content_digest(cfg.text() + std::to_string(seed));
    report.inputsDigest = digest;
    save_container(outContainer, members, "uloc build " + construction + " digest=" + digest +
                                              " seed=" + std::to_string(seed));
    write_file_atomic(outReport, report_to_json(report));
    return report.allPass() ? 0 : 1;
}

int run_annihilate(double b, double c, const std::string& gridFlag, const std::string& outDir)
{
    const GridSpec grid = gridFlag.empty() ? GridSpec::line(1024, -8.0, 8.0)
                                           : parse_grid_flag(gridFlag);
    const AnnihilatorResult result = annihilating_function(b, c, grid);

    AuditReport report;
    report.auditName = "annihilating-function";
    report.timestamp = now_iso8601();
    report.inputsDigest = content_digest("annihilate b=" + std::to_string(b) +
                                         " c=" + std::to_string(c));
    report.addScalar("residual", result.residual, 1e-3, result.residual <= 1e-3);
    report.addScalar("norm", result.f.norm(), 1e-10, std::abs(result.f.norm() - 1.0) <= 1e-10);

    save_container(in_dir(outDir, "annihilator.ufc1"), {result.f}, report.inputsDigest);
    write_file_atomic(in_dir(outDir, "annihilate_report.json"), report_to_json(report));
    return report.allPass() ? 0 : 1;
}

int run_scan(const std::string& source, int maxK, double p, const std::string& outDir)
{
    std::vector<SampledFunction> members;
    if (source == "hermite") {
        members = hermite_members(maxK + 1, default_grid(1));
    } else {
        auto [info, loaded] = load_container(source);
        members = std::move(loaded);
    }
    OrthonormalSystem system(std::move(members), 1e-6);
    const DyadicScanReport scan = dyadic_bin_scan(system, p);

    AuditReport report;
    report.auditName = "dyadic-scan";
    report.timestamp = now_iso8601();
    report.inputsDigest = samples_digest(system.members(), source);
    report.addScalar("supProduct", scan.supProduct, 0.0, true);
    AuditTable bins{"bins", {"k", "count", "bin_upper"}, {}};
    for (const DyadicBin& bin : scan.bins)
        bins.rows.push_back({static_cast<double>(bin.k), static_cast<double>(bin.count),
                             bin.binUpper});
    report.tables.push_back(bins);
    AuditTable prods{"products", {"n", "product", "bin"}, {}};
    for (std::size_t n = 0; n < scan.products.size(); ++n)
        prods.rows.push_back({static_cast<double>(n), scan.products[n],
                              static_cast<double>(scan.memberBin[n])});
    report.tables.push_back(prods);

    write_file_atomic(in_dir(outDir, "scan_report.json"), report_to_json(report));
    write_file_atomic(in_dir(outDir, "scan_bins.csv"), table_to_csv(bins));
    write_file_atomic(in_dir(outDir, "scan_products.csv"), table_to_csv(prods));
    return 0;
}

int run_report(const std::string& inJson, const std::string& outCsv, const std::string& outSvg,
               const std::string& tableName)
{
    std::ifstream is(inJson);
    if (!is) throw Error("cannot open " + inJson);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const AuditReport report = report_from_json(text);

    if (!outCsv.empty()) {
        if (tableName.empty()) {
            write_file_atomic(outCsv, scalars_to_csv(report));
        } else {
            bool found = false;
            for (const AuditTable& t : report.tables)
                if (t.name == tableName) {
                    write_file_atomic(outCsv, table_to_csv(t));
                    found = true;
                }
            if (!found) throw Error("table not found: " + tableName);
        }
    }
    if (!outSvg.empty() && !tableName.empty()) {
        for (const AuditTable& t : report.tables)
            if (t.name == tableName && !t.rows.empty()) {
                std::vector<double> col;
                for (const auto& row : t.rows) col.push_back(row.size() > 1 ? row[1] : row[0]);
                write_file_atomic(outSvg, bars_to_svg(tableName, col));
            }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"time-frequency localization toolkit"};
    app.require_subcommand(1);

    auto* hermiteCmd = app.add_subcommand("hermite", "dispersion and moment-sum tables");
    int maxK = 8;
    std::string gridFlag, outDir = ".";
    hermiteCmd->add_option("--max-k", maxK, "largest order");
    hermiteCmd->add_option("--grid", gridFlag, "n,h,x0[;n,h,x0]");
    hermiteCmd->add_option("--out", outDir, "output directory");

    auto* localizeCmd = app.add_subcommand("localize", "localization audit from a config file");
    std::string localizeConfig;
    localizeCmd->add_option("--config", localizeConfig, "config path")->required();

    auto* buildCmd = app.add_subcommand("build", "orthonormal-basis constructions");
    std::string buildConfig;
    buildCmd->add_option("--config", buildConfig, "config path")->required();

    auto* annihilateCmd = app.add_subcommand("annihilate", "doubly-vanishing function solver");
    double bRadius = 1.0, cRadius = 1.0;
    std::string annGrid, annOut = ".";
    annihilateCmd->add_option("--b", bRadius, "spatial ball radius");
    annihilateCmd->add_option("--c", cRadius, "frequency ball radius");
    annihilateCmd->add_option("--grid", annGrid, "n,h,x0");
    annihilateCmd->add_option("--out", annOut, "output directory");

    auto* scanCmd = app.add_subcommand("scan", "dyadic moment-product scan");
    std::string scanSource = "hermite", scanOut = ".";
    int scanMaxK = 9;
    double scanP = 2.0;
    scanCmd->add_option("--source", scanSource, "hermite | container path");
    scanCmd->add_option("--max-k", scanMaxK, "hermite orders when source=hermite");
    scanCmd->add_option("--p", scanP, "moment exponent");
    scanCmd->add_option("--out", scanOut, "output directory");

    auto* reportCmd = app.add_subcommand("report", "re-render a JSON report");
    std::string repIn, repCsv, repSvg, repTable;
    reportCmd->add_option("--in", repIn, "input JSON")->required();
    reportCmd->add_option("--csv", repCsv, "CSV output");
    reportCmd->add_option("--svg", repSvg, "SVG output");
    reportCmd->add_option("--table", repTable, "table name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (hermiteCmd->parsed()) return run_hermite(maxK, gridFlag, outDir);
        if (localizeCmd->parsed()) return run_localize(localizeConfig);
        if (buildCmd->parsed()) return run_build(buildConfig);
        if (annihilateCmd->parsed()) return run_annihilate(bRadius, cRadius, annGrid, annOut);
        if (scanCmd->parsed()) return run_scan(scanSource, scanMaxK, scanP, scanOut);
        if (reportCmd->parsed()) return run_report(repIn, repCsv, repSvg, repTable);
    } catch (const TruncationError& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return 3;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return 3;
    } catch (const ResolutionError& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return 3;
    } catch (const AdmissionRuleError& e) {
        std::fprintf(stderr, "construction failed: %s\n", e.what());
        return 1;
    } catch (const SupportCollisionError& e) {
        std::fprintf(stderr, "construction failed: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

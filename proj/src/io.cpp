#include "hsflow/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hsflow/audit.hpp"
#include "hsflow/fuzz.hpp"
#include "hsflow/gauge.hpp"
#include "hsflow/geometry.hpp"

namespace hsflow {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("malformed number '" + v + "'", line);
    }
}

long parse_long(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("malformed integer '" + v + "'", line);
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("malformed flag '" + v + "'", line);
}

}  // namespace

RunSetup parse_config(const std::string& text) {
    RunSetup s;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string ln = trim(raw);
        if (ln.empty()) continue;
        const auto eq = ln.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(ln.substr(0, eq));
        const std::string val = trim(ln.substr(eq + 1));
        if (val.empty()) throw ConfigError("missing value for '" + key + "'", line);

        if (key == "N") {
            const long n = parse_long(val, line);
            if (n < 8 || n % 2 != 0)
                throw ConfigError("N must be even and >= 8", line);
            s.cfg.n = static_cast<int>(n);
        } else if (key == "scheme") {
            if (val == "spectral") s.cfg.scheme = Scheme::spectral;
            else if (val == "fd4") s.cfg.scheme = Scheme::fd4;
            else throw ConfigError("scheme must be spectral or fd4", line);
        } else if (key == "cflSafety") {
            s.cfg.cfl_safety = parse_double(val, line);
            if (s.cfg.cfl_safety <= 0 || s.cfg.cfl_safety > 1)
                throw ConfigError("cflSafety must be in (0,1]", line);
        } else if (key == "dtMax") {
            s.cfg.dt_max = (val == "inf") ? std::numeric_limits<double>::infinity()
                                          : parse_double(val, line);
            if (s.cfg.dt_max <= 0) throw ConfigError("dtMax must be positive", line);
        } else if (key == "tEnd") {
            s.cfg.t_end = parse_double(val, line);
            if (s.cfg.t_end <= 0) throw ConfigError("tEnd must be positive", line);
        } else if (key == "stopTol") {
            s.cfg.stop_tol = parse_double(val, line);
            if (s.cfg.stop_tol < 0) throw ConfigError("stopTol must be >= 0", line);
        } else if (key == "outputEvery") {
            s.cfg.output_every = parse_double(val, line);
            if (s.cfg.output_every <= 0)
                throw ConfigError("outputEvery must be positive", line);
        } else if (key == "renormalizeQ") {
            s.cfg.renormalize_q = parse_bool(val, line);
        } else if (key == "preset") {
            if (val != "cosine" && val != "skewed" && val != "offdiag" &&
                val != "constant")
                throw ConfigError("unknown preset '" + val + "'", line);
            s.preset = val;
        } else if (key == "cosineAmp") {
            s.cosine_amp = parse_double(val, line);
            if (std::fabs(s.cosine_amp) >= 1)
                throw ConfigError("cosineAmp must satisfy |a| < 1", line);
        } else if (key == "constantMatrix") {
            std::istringstream ms(val);
            SymMat3 m;
            for (int k = 0; k < 6; ++k)
                if (!(ms >> m[k]))
                    throw ConfigError("constantMatrix needs 6 entries", line);
            std::string extra;
            if (ms >> extra) throw ConfigError("constantMatrix needs 6 entries", line);
            if (!is_positive_definite(m))
                throw ConfigError("constantMatrix must be positive definite", line);
            s.constant_matrix = m;
        } else if (key == "out") {
            s.out_dir = val;
        } else if (key == "seed") {
            s.seed = static_cast<std::uint64_t>(parse_long(val, line));
        } else if (key == "trials") {
            s.trials = parse_long(val, line);
            if (s.trials < 0) throw ConfigError("trials must be >= 0", line);
        } else if (key == "initialSnapshot") {
            s.initial_snapshot = val;
        } else {
            throw ConfigError("unknown key '" + key + "'", line);
        }
    }
    return s;
}

std::string config_text(const RunSetup& s) {
    std::ostringstream o;
    o << "N = " << s.cfg.n << "\n";
    o << "scheme = " << (s.cfg.scheme == Scheme::spectral ? "spectral" : "fd4") << "\n";
    o << "cflSafety = " << fmt17(s.cfg.cfl_safety) << "\n";
    if (std::isfinite(s.cfg.dt_max)) o << "dtMax = " << fmt17(s.cfg.dt_max) << "\n";
    else o << "dtMax = inf\n";
    o << "tEnd = " << fmt17(s.cfg.t_end) << "\n";
    o << "stopTol = " << fmt17(s.cfg.stop_tol) << "\n";
    o << "outputEvery = " << fmt17(s.cfg.output_every) << "\n";
    o << "renormalizeQ = " << (s.cfg.renormalize_q ? "true" : "false") << "\n";
    o << "preset = " << s.preset << "\n";
    o << "cosineAmp = " << fmt17(s.cosine_amp) << "\n";
    o << "constantMatrix =";
    for (int k = 0; k < 6; ++k) o << " " << fmt17(s.constant_matrix[k]);
    o << "\n";
    o << "out = " << s.out_dir << "\n";
    o << "seed = " << s.seed << "\n";
    o << "trials = " << s.trials << "\n";
    if (!s.initial_snapshot.empty())
        o << "initialSnapshot = " << s.initial_snapshot << "\n";
    return o.str();
}

Mat3Field make_preset(const std::string& name, const CircleGrid& grid,
                      double cosine_amp, const SymMat3& constant_matrix) {
    if (name == "cosine") {
        return Mat3Field::sample(grid, [&](double x) {
            return Mat3::diag(1.0 + cosine_amp * std::cos(x), 1.0, 1.0);
        });
    }
    if (name == "skewed") {
        return Mat3Field::sample(grid, [&](double x) {
            const SymMat3 b = SymMat3::diag(1.0 + 0.3 * std::cos(x), 1.0, 1.0);
            return assemble(b, Vec3{0.2 * std::sin(x), 0.0, 0.0});
        });
    }
    if (name == "offdiag") {
        return Mat3Field::sample(grid, [&](double x) {
            SymMat3 b = SymMat3::identity();
            b.s13 = 0.2 * std::sin(x);
            return b.full();
        });
    }
    if (name == "constant") {
        return Mat3Field::sample(grid,
                                 [&](double) { return constant_matrix.full(); });
    }
    throw Error("unknown preset '" + name + "'");
}

Mat3Field initial_data(const RunSetup& s) {
    if (!s.initial_snapshot.empty()) {
        const std::vector<FlowState> snaps = read_snapshots(s.initial_snapshot);
        if (snaps.empty()) throw Error("no snapshots in " + s.initial_snapshot);
        if (snaps.back().grid().n != s.cfg.n)
            throw GridMismatch("stored snapshot grid does not match config N");
        return snaps.back().alpha();
    }
    return make_preset(s.preset, CircleGrid(s.cfg.n), s.cosine_amp,
                       s.constant_matrix);
}

const char* const series_header =
    "t,v,torsion_max,riccati_envelope,detQ_err_max,cohom_drift_max,trQ_max,"
    "skew_drift_max,min_eig_beta,qhat_dist,qhat_prime_inf,curv_max";

std::string series_line(const SeriesRow& r) {
    std::ostringstream o;
    o << fmt17(r.rec.t) << ',' << fmt17(r.rec.v) << ',' << fmt17(r.rec.torsion_max)
      << ',' << fmt17(r.riccati_envelope) << ',' << fmt17(r.rec.detQ_err_max) << ','
      << fmt17(r.cohom_drift_max) << ',' << fmt17(r.rec.trQ_max) << ','
      << fmt17(r.rec.skew_drift_max) << ',' << fmt17(r.rec.min_eig_beta) << ','
      << fmt17(r.qhat_dist) << ',' << fmt17(r.qhat_prime_inf) << ','
      << fmt17(r.curv_max);
    return o.str();
}

std::vector<SeriesRow> assemble_series(const std::vector<FlowState>& snapshots,
                                       const std::vector<DiagnosticsRecord>& records,
                                       const Mat3Field& alpha0, Scheme scheme) {
    if (snapshots.size() != records.size())
        throw Error("assemble_series: snapshot/record count mismatch");
    const LimitPrediction pred = limit_prediction(alpha0);
    std::vector<SeriesRow> rows;
    rows.reserve(records.size());
    const double top = records.empty() ? 0.0 : records.front().torsion_max;
    const double t0 = records.empty() ? 0.0 : records.front().t;
    for (size_t i = 0; i < records.size(); ++i) {
        SeriesRow row;
        row.rec = records[i];
        row.riccati_envelope = top / (1.0 + top * (records[i].t - t0) / 3.0);
        row.cohom_drift_max = (records[i].cohom - records.front().cohom).max_abs();

        ScalarField v;
        SymMat3Field q;
        v_q_fields(snapshots[i].beta, v, q);
        const GaugeMap gauge = build_gauge(v);
        const SymMat3Field qhat = resample_hat(q, gauge, q.grid.n);
        const ConvergenceReport rep = convergence_report(qhat, pred, gauge.v);
        row.qhat_dist = rep.dist_inf;
        row.qhat_prime_inf = rep.q_prime_inf;
        row.curv_max = curvature_hat(qhat, gauge.v, scheme).max_abs();
        rows.push_back(row);
    }
    return rows;
}

std::vector<CheckResult> check_series(const std::vector<SeriesRow>& rows) {
    std::vector<CheckResult> out;
    if (rows.empty()) return out;

    double v_drop = 0, trq_rise = 0, v_over = 0, cohom = 0, detq = 0, skew = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].rec;
        if (i > 0) {
            v_drop = std::fmax(v_drop, rows[i - 1].rec.v - r.v);
            trq_rise = std::fmax(trq_rise, r.trQ_max - rows[i - 1].rec.trQ_max);
        }
        v_over = std::fmax(v_over, r.v - r.volume_bound);
        cohom = std::fmax(cohom, rows[i].cohom_drift_max);
        detq = std::fmax(detq, r.detQ_err_max);
        skew = std::fmax(skew, r.skew_drift_max);
    }
    out.push_back({"v-nondecreasing", v_drop <= 1e-10, v_drop, 1e-10});
    out.push_back({"v-below-volume-bound", v_over <= 1e-10, v_over, 1e-10});
    out.push_back({"trQ-nonincreasing", trq_rise <= 1e-10, trq_rise, 1e-10});
    out.push_back({"cohomology-conservation", cohom <= 1e-9, cohom, 1e-9});
    out.push_back({"detQ-unit", detq <= 1e-12, detq, 1e-12});
    out.push_back({"skew-constancy", skew <= 1e-12, skew, 1e-12});

    const double m = rows.front().rec.trQ_max;
    double eig_lo_short = 0, eig_hi_over = 0;
    for (const auto& row : rows) {
        eig_lo_short = std::fmax(eig_lo_short,
                                 (1.0 - 1e-8) / (m * m) - row.rec.eig_lo);
        eig_hi_over = std::fmax(eig_hi_over, row.rec.eig_hi - m * (1.0 + 1e-8));
    }
    out.push_back({"eig-sandwich-lower", eig_lo_short <= 0, eig_lo_short, 0});
    out.push_back({"eig-sandwich-upper", eig_hi_over <= 0, eig_hi_over, 0});

    std::vector<std::pair<double, double>> series;
    series.reserve(rows.size());
    for (const auto& row : rows) series.emplace_back(row.rec.t, row.rec.torsion_max);
    const RiccatiReport ric = riccati_check(series);
    out.push_back({"riccati-envelope", ric.ok, ric.worst_margin, 0});
    return out;
}

void write_series(const std::string& path, const std::vector<SeriesRow>& rows) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path);
    f << series_header << "\n";
    for (const auto& r : rows) f << series_line(r) << "\n";
}

void write_snapshots(const std::string& path,
                     const std::vector<FlowState>& snapshots, Scheme scheme) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path);
    for (const FlowState& s : snapshots) {
        const ScalarField v = v_field(s.beta);
        const ScalarField torsion = torsion_field(s.beta, scheme);
        const Mat3Field alpha = s.alpha();
        for (int k = 0; k < s.grid().n; ++k) {
            f << "{\"t\":" << fmt17(s.t) << ",\"x0\":" << fmt17(s.grid().node(k))
              << ",\"alpha\":[";
            const Mat3 a = alpha.at(k);
            for (int j = 0; j < 9; ++j) f << (j ? "," : "") << fmt17(a.m[j]);
            f << "],\"V\":" << fmt17(v.v[k]) << ",\"T\":" << fmt17(torsion.v[k])
              << "}\n";
        }
    }
}

void write_manifest(const std::string& path, const RunSetup& setup) {
    nlohmann::json j;
    j["formatVersion"] = "1";
    j["configText"] = config_text(setup);
    j["outDir"] = setup.out_dir;
    if (!setup.initial_snapshot.empty()) {
        j["initialData"] = {{"kind", "snapshot"}, {"path", setup.initial_snapshot}};
    } else {
        j["initialData"] = {{"kind", "preset"}, {"name", setup.preset}};
    }
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path);
    f << j.dump(2) << "\n";
}

std::vector<FlowState> read_snapshots(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    std::vector<FlowState> out;
    std::vector<std::array<double, 9>> entries;
    double cur_t = 0;
    bool have = false;

    auto flush = [&]() {
        if (entries.empty()) return;
        const CircleGrid g(static_cast<int>(entries.size()));
        Mat3Field a(g);
        for (int k = 0; k < g.n; ++k) a.set(k, Mat3{entries[k]});
        out.push_back(FlowState::from_alpha(a, cur_t));
        entries.clear();
    };

    std::string line;
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        const double t = j.at("t").get<double>();
        if (!have || t != cur_t) {
            flush();
            cur_t = t;
            have = true;
        }
        std::array<double, 9> a{};
        const auto& arr = j.at("alpha");
        for (int k = 0; k < 9; ++k) a[k] = arr.at(k).get<double>();
        entries.push_back(a);
    }
    flush();
    return out;
}

namespace {

int report_checks(const std::vector<CheckResult>& checks) {
    bool all_ok = true;
    for (const auto& c : checks) {
        std::printf("%s %-26s worst %.6g  bound %.3g\n", c.ok ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.bound);
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int cmd_run(const RunSetup& setup) {
    namespace fs = std::filesystem;
    fs::create_directories(setup.out_dir);
    const Mat3Field alpha0 = initial_data(setup);
    const RunResult res = run(setup.cfg, alpha0);
    const std::vector<SeriesRow> rows =
        assemble_series(res.snapshots, res.records, alpha0, setup.cfg.scheme);

    write_series(setup.out_dir + "/series.csv", rows);
    write_snapshots(setup.out_dir + "/snapshots.jsonl", res.snapshots,
                    setup.cfg.scheme);
    write_manifest(setup.out_dir + "/manifest.json", setup);

    std::printf("run: %zu records, t_final = %s, %s\n", rows.size(),
                fmt17(res.t_final).c_str(),
                res.converged ? "converged" : "reached tEnd");
    const SeriesRow& last = rows.back();
    std::printf("final: v = %.12g  |Qhat-Qinf| = %.3g  |Qhat'| = %.3g  curv = %.3g\n",
                last.rec.v, last.qhat_dist, last.qhat_prime_inf, last.curv_max);
    return report_checks(check_series(rows));
}

int cmd_audit(const RunSetup& setup, const std::string& snapshots_path) {
    namespace fs = std::filesystem;
    fs::create_directories(setup.out_dir);
    const std::vector<FlowState> snaps = read_snapshots(snapshots_path);
    if (snaps.empty()) {
        std::fprintf(stderr, "audit: no snapshots in %s\n", snapshots_path.c_str());
        return 2;
    }
    const Mat3Field alpha0 = snaps.front().alpha();
    std::vector<DiagnosticsRecord> records;
    records.reserve(snaps.size());
    for (const FlowState& s : snaps)
        records.push_back(audit(s, alpha0, setup.cfg.scheme));
    const std::vector<SeriesRow> rows =
        assemble_series(snaps, records, alpha0, setup.cfg.scheme);
    write_series(setup.out_dir + "/audit.csv", rows);
    std::printf("audit: %zu snapshots recomputed\n", rows.size());
    return report_checks(check_series(rows));
}

int cmd_predict_limit(const RunSetup& setup) {
    const Mat3Field alpha0 = initial_data(setup);
    const LimitPrediction p = limit_prediction(alpha0);
    std::printf("v_inf = %s\n", fmt17(p.v_inf).c_str());
    std::printf("qhat_inf =\n");
    const Mat3 q = p.qhat_inf.full();
    for (int i = 0; i < 3; ++i)
        std::printf("  [%s, %s, %s]\n", fmt17(q(i, 0)).c_str(),
                    fmt17(q(i, 1)).c_str(), fmt17(q(i, 2)).c_str());
    return 0;
}

int cmd_lemma_fuzz(const RunSetup& setup) {
    const auto results = run_lemma_fuzz(setup.seed, setup.trials);
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%s %-20s trials %ld  worst %.3g  tol %.3g\n",
                    r.ok ? "PASS" : "FAIL", r.name.c_str(), r.trials, r.worst,
                    r.tol);
        all_ok = all_ok && r.ok;
    }
    return all_ok ? 0 : 1;
}

int cmd_linearize_audit(const RunSetup& setup) {
    const CircleGrid grid(setup.cfg.n);
    const Scheme scheme = setup.cfg.scheme;

    const SymMat3Field alpha = SymMat3Field::sample(grid, [&](double x) {
        SymMat3 a = SymMat3::diag(1.0 + setup.cosine_amp * std::cos(x), 1.0, 1.0);
        a.s12 = 0.1 * std::sin(x);
        return a;
    });
    const SymMat3Field dir = SymMat3Field::sample(grid, [](double x) {
        SymMat3 b = SymMat3::diag(std::cos(x), -0.2 * std::sin(2 * x), 0.1);
        b.s13 = 0.3 * std::cos(2 * x);
        return b;
    });

    const SymMat3Field lin = linearize(alpha, dir, scheme);
    const Vec3Field zero_gamma(grid);

    auto fd_error = [&](double eps) {
        FlowState sp, sm;
        sp.beta = alpha;
        sm.beta = alpha;
        sp.gamma = zero_gamma;
        sm.gamma = zero_gamma;
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < grid.n; ++k) {
                sp.beta.c[j][k] += eps * dir.c[j][k];
                sm.beta.c[j][k] -= eps * dir.c[j][k];
            }
        const SymMat3Field fp = rhs_expanded(sp, scheme);
        const SymMat3Field fm = rhs_expanded(sm, scheme);
        double worst = 0;
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < grid.n; ++k)
                worst = std::fmax(worst, std::fabs((fp.c[j][k] - fm.c[j][k]) /
                                                       (2 * eps) -
                                                   lin.c[j][k]));
        return worst;
    };

    const double e3 = fd_error(1e-3);
    const double e4 = fd_error(1e-4);
    const bool scaling_ok = e4 <= e3 / 50.0;
    std::printf("%s richardson-scaling      err(1e-3) %.3g  err(1e-4) %.3g  ratio %.3g\n",
                scaling_ok ? "PASS" : "FAIL", e3, e4, e3 / e4);

    double sym_worst = 0;
    for (int k = 0; k < grid.n; ++k) {
        const SymMat3 a = alpha.at(k);
        sym_worst = std::fmax(sym_worst, principal_symbol(a, 1.0, a).max_abs());
    }
    const bool symbol_ok = sym_worst <= 1e-14;
    std::printf("%s symbol-kills-alpha      worst %.3g  bound 1e-14\n",
                symbol_ok ? "PASS" : "FAIL", sym_worst);

    double hom_worst = 0;
    for (int k = 0; k < grid.n; k += 7) {
        const SymMat3 a = alpha.at(k);
        const SymMat3 b = dir.at(k);
        const SymMat3 s1 = principal_symbol(a, 2.0, b);
        const SymMat3 s2 = principal_symbol(a, 1.0, b) * 4.0;
        hom_worst = std::fmax(hom_worst, (s1 - s2).max_abs());
    }
    const bool hom_ok = hom_worst <= 1e-13;
    std::printf("%s symbol-homogeneity      worst %.3g  bound 1e-13\n",
                hom_ok ? "PASS" : "FAIL", hom_worst);

    return (scaling_ok && symbol_ok && hom_ok) ? 0 : 1;
}

}  // namespace hsflow

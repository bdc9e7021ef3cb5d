// Acceptance run: one PASS/FAIL line per criterion; exits nonzero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qsync/errors.hpp"
#include "qsync/sweep.hpp"

using namespace qsync;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SweepGrid sweep(const std::string& json) { return run_sweep(parse_config(json)); }

// Column index of a measure in a grid.
std::size_t column(const SweepGrid& g, const std::string& name) {
    const auto it = std::find(g.columns.begin(), g.columns.end(), name);
    if (it == g.columns.end()) throw std::logic_error("no column " + name);
    return static_cast<std::size_t>(it - g.columns.begin());
}

double value(const SweepGrid& g, std::size_t i, std::size_t j, std::size_t col) { return g.at(i, j).values[col]; }

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i] / n;
        mb += rb[i] / n;
    }
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Truncation deltas collected from every oscillator run, for the convergence criterion.
struct TruncationLog {
    std::vector<std::pair<std::string, double>> entries;

    void add(const std::string& what, double delta) { entries.emplace_back(what, delta); }
    void add(const std::string& what, const SweepGrid& g) { add(what, g.max_truncation_delta()); }
};

TruncationLog truncation;

// ---------------------------------------------------------------------------------------------

Outcome closed_forms() {
    const auto t0 = Clock::now();
    StateSampler sampler(2024);
    const std::vector<Dims> shapes = {{2, 2}, {3, 3}, {2, 3}};
    double identity_err = 0.0, beat = -1e300;
    for (int k = 0; k < 200; ++k) {
        const DensityMatrix r = sampler.random_density(shapes[k % 3]);
        const double dc = omega_r(r, DiagonalCorrelated{}).value;
        const double mp = omega_r(r, MarginalProduct{}).value;
        const double dp = omega_r(r, DiagonalProduct{}).value;
        identity_err = std::max({identity_err, std::abs(dc - s_coh(r)), std::abs(mp - mutual_information(r)),
                                 std::abs(dp - (s_coh(r) + classical_mutual_information(dephase(r))))});
        const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(k);
        beat = std::max({beat, dc - oracle_min(r, DiagonalCorrelated{}, 2000, seed),
                         mp - oracle_min(r, MarginalProduct{}, 2000, seed),
                         dp - oracle_min(r, DiagonalProduct{}, 2000, seed)});
    }
    const double t = seconds_since(t0);
    return {identity_err <= 1e-10 && beat <= 1e-9 && t < 60.0,
            "max identity error " + fmt("%.2e", identity_err) + ", oracle beats closed form by at most " +
                fmt("%.2e", beat) + ", " + fmt("%.1f", t) + " s"};
}

Outcome decomposition() {
    StateSampler sampler(7);
    const std::vector<Index> dims = {2, 3, 4, 6, 9};
    double err = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Index d = dims[k % dims.size()];
        const DensityMatrix r = sampler.random_density({static_cast<int>(d)});
        const RealVector q = sampler.dirichlet(d);
        const DensityMatrix sigma = DensityMatrix::diagonal(q, {static_cast<int>(d)});
        const double lhs = relative_entropy(r, sigma);
        const double rhs = s_coh(r) + kl_populations(PopulationVector(r.populations()), PopulationVector(q));
        err = std::max(err, std::abs(lhs - rhs));
    }
    return {err <= 1e-10, "max |S(rho||sigma) - S_coh - D_KL| = " + fmt("%.2e", err)};
}

const char* kSpinTongue = R"({"schema_version": "1",
    "model": {"type": "driven_spin1", "params": {"gamma_g": 1, "gamma_d": 10}},
    "sweep": {"axis1": {"param": "epsilon", "min": 0, "max": 1, "count": 21},
              "axis2": {"param": "delta", "min": -2, "max": 2, "count": 21}},
    "measures": ["omega_d", "c_l1", "s_phase"]})";

SweepGrid& spin_tongue() {
    static SweepGrid g = sweep(kSpinTongue);
    return g;
}

Outcome trace_distance_bound() {
    const SweepGrid& g = spin_tongue();
    const std::size_t od = column(g, "omega_d"), cl = column(g, "c_l1");
    double worst = -1e300;
    for (const auto& c : g.cells) worst = std::max(worst, c.values[od] - c.values[cl]);
    const double plus = omega_d(DensityMatrix(ComplexMatrix::Constant(2, 2, 0.5))).value;
    return {worst <= 0.0 && std::abs(plus - 1.0) <= 1e-8 && !g.any_failed(),
            "max(Omega_D - C_l1) over 441 cells = " + fmt("%.2e", worst) + ", Omega_D(|+>) - 1 = " +
                fmt("%.2e", plus - 1.0)};
}

Outcome undriven_limit() {
    const auto t0 = Clock::now();
    DrivenVdp v;
    v.delta = 0.1;
    v.gamma_g = 1.0;
    v.gamma_d = 0.5;
    v.epsilon = 0.0;
    v.n_fock = 20;
    std::vector<MeasureSpec> ms(1);
    ms[0].id = ms[0].column = "omega_r";
    const CellResult cell = evaluate_point(v, ms, true, 0);
    truncation.add("undriven vdP N=20", cell.truncation_delta);
    const DensityMatrix rv = steady_state(build_model(v).liouvillian());
    ComplexMatrix off = rv.matrix();
    off.diagonal().setZero();
    const double max_off = off.cwiseAbs().maxCoeff();

    DrivenSpin1 s;
    s.epsilon = 0.0;
    const DensityMatrix rs = steady_state(build_model(s).liouvillian());
    const double fidelity = rs(1, 1).real();
    const double t = seconds_since(t0);
    const bool ok = max_off < 1e-8 && cell.values[0] < 1e-8 && !cell.failed() && fidelity > 1.0 - 1e-8 && t < 10.0;
    return {ok, "vdP max offdiag " + fmt("%.2e", max_off) + ", Omega_R " + fmt("%.2e", cell.values[0]) +
                    ", spin fidelity with m=0 is 1 - " + fmt("%.2e", 1.0 - fidelity) + ", " + fmt("%.1f", t) + " s"};
}

// Max at Δ = 0 for every slice (axis1 = strength, axis2 = Δ with the centre at index n/2), Δ-even.
struct TongueShape {
    double max_excess = -1e300; // max over slices of (max over Δ) − value at Δ = 0
    double asymmetry = 0.0;
};

TongueShape tongue_shape(const SweepGrid& g, std::size_t col) {
    TongueShape s;
    const std::size_t n = g.axis2.size(), mid = n / 2;
    for (std::size_t i = 0; i < g.axis1.size(); ++i) {
        double best = -1e300;
        for (std::size_t j = 0; j < n; ++j) {
            best = std::max(best, value(g, i, j, col));
            s.asymmetry = std::max(s.asymmetry, std::abs(value(g, i, j, col) - value(g, i, n - 1 - j, col)));
        }
        s.max_excess = std::max(s.max_excess, best - value(g, i, mid, col));
    }
    return s;
}

Outcome arnold_tongues() {
    const auto t0 = Clock::now();
    const SweepGrid vdp = sweep(R"({"schema_version": "1",
        "model": {"type": "driven_vdp", "params": {"gamma_g": 1, "gamma_d": 10, "n_fock": 10}},
        "sweep": {"axis1": {"param": "epsilon", "min": 0, "max": 1, "count": 21},
                  "axis2": {"param": "delta", "min": -2, "max": 2, "count": 21}},
        "measures": ["omega_r", "c1"]})");
    truncation.add("driven vdP tongue N=10", vdp);
    const SweepGrid& spin = spin_tongue();

    std::ostringstream d;
    bool ok = !vdp.any_failed() && !spin.any_failed();
    auto shape = [&](const SweepGrid& g, const std::string& name) {
        const TongueShape s = tongue_shape(g, column(g, name));
        ok = ok && s.max_excess <= 0.0 && s.asymmetry <= 1e-9;
        d << name << " peak excess " << fmt("%.1e", s.max_excess) << " asym " << fmt("%.1e", s.asymmetry) << "; ";
    };
    shape(vdp, "omega_r");
    shape(vdp, "c1");
    shape(spin, "omega_d");
    shape(spin, "s_phase");

    const std::size_t orc = column(vdp, "omega_r"), mid = vdp.axis2.size() / 2;
    double drop = 0.0;
    for (std::size_t i = 1; i < vdp.axis1.size() && vdp.axis1[i] <= 0.5 + 1e-12; ++i)
        drop = std::max(drop, value(vdp, i - 1, mid, orc) - value(vdp, i, mid, orc));
    ok = ok && drop <= 0.0;

    std::vector<double> a, b;
    for (const auto& c : vdp.cells) {
        a.push_back(c.values[orc]);
        b.push_back(c.values[column(vdp, "c1")]);
    }
    const double rho = spearman(a, b);
    const double t = seconds_since(t0);
    ok = ok && rho > 0.9 && t < 300.0;
    d << "Omega_R decrease along eps<=0.5 " << fmt("%.1e", drop) << "; Spearman(Omega_R, C1) " << fmt("%.4f", rho)
      << "; " << fmt("%.1f", t) << " s";
    return {ok, d.str()};
}

Outcome coupled_systems() {
    const auto t0 = Clock::now();
    const SweepGrid spins = sweep(R"({"schema_version": "1",
        "model": {"type": "coupled_spin1"},
        "sweep": {"axis1": {"param": "g", "min": 0, "max": 1, "count": 11},
                  "axis2": {"param": "delta", "min": -2, "max": 2, "count": 11}},
        "measures": ["omega_r"]})");
    const SweepGrid hybrid = sweep(R"({"schema_version": "1",
        "model": {"type": "hybrid_vdp_spin1", "params": {"n_fock": 10}},
        "sweep": {"axis1": {"param": "epsilon", "min": 0, "max": 1, "count": 11},
                  "axis2": {"param": "delta", "min": -2, "max": 2, "count": 11}},
        "measures": ["omega_r"]})");
    truncation.add("hybrid grid N=10", hybrid);

    bool ok = !spins.any_failed() && !hybrid.any_failed();
    std::ostringstream d;
    auto check = [&](const SweepGrid& g, ModelSpec weak, const std::string& coupling, const std::string& name) {
        const std::size_t mid = g.axis2.size() / 2;
        double min_strong = 1e300;
        for (std::size_t i = 0; i < g.axis1.size(); ++i)
            if (g.axis1[i] > 0.05) min_strong = std::min(min_strong, value(g, i, mid, 0));
        std::vector<MeasureSpec> ms(1);
        ms[0].id = ms[0].column = "omega_r";
        set_parameter(weak, "delta", 0.0);
        set_parameter(weak, coupling, 1e-4);
        const CellResult w = evaluate_point(weak, ms, has_oscillator(weak), 0);
        if (has_oscillator(weak)) truncation.add(name + " coupling 1e-4", w.truncation_delta);
        ok = ok && min_strong > 0.0 && !w.failed() && w.values[0] < 1e-6;
        d << name << ": min Omega_R(coupling>0.05, Delta=0) " << fmt("%.3e", min_strong) << ", Omega_R(1e-4) "
          << fmt("%.2e", w.values[0]) << "; ";
    };
    check(spins, CoupledSpin1{}, "g", "coupled spins");
    HybridVdpSpin1 h;
    h.n_fock = 10;
    check(hybrid, h, "epsilon", "hybrid");
    const double t = seconds_since(t0);
    ok = ok && t < 600.0;
    d << fmt("%.1f", t) << " s";
    return {ok, d.str()};
}

Outcome partially_coherent() {
    const SweepGrid driven = sweep(R"({"schema_version": "1",
        "model": {"type": "coupled_driven_spin1", "params": {"delta_local": 0, "epsilon": 0.01}},
        "sweep": {"axis1": {"param": "g", "min": 0, "max": 1, "count": 11},
                  "axis2": {"param": "delta", "min": -2, "max": 2, "count": 11}},
        "measures": ["mutual_information", {"id": "omega_r", "class": "partially_coherent_product"},
                     "s_coh", "classical_mutual_information"]})");
    const SweepGrid undriven = sweep(R"({"schema_version": "1",
        "model": {"type": "coupled_spin1"},
        "sweep": {"axis1": {"param": "g", "min": 0, "max": 1, "count": 11},
                  "axis2": {"param": "delta", "min": -2, "max": 2, "count": 11}},
        "measures": ["omega_r"]})");
    const std::size_t mi = column(driven, "mutual_information"),
                      pc = column(driven, "omega_r_partially_coherent_product"), sc = column(driven, "s_coh"),
                      ic = column(driven, "classical_mutual_information");
    double lower = 1e300, upper = 1e300, peak = 0.0;
    for (const auto& c : driven.cells) {
        lower = std::min(lower, c.values[pc] - c.values[mi]);
        upper = std::min(upper, c.values[sc] + c.values[ic] - c.values[pc]);
    }
    for (const auto& c : undriven.cells) peak = std::max(peak, c.values[0]);
    const double cutoff = 0.1 * peak;
    int area_driven = 0, area_undriven = 0;
    for (const auto& c : driven.cells) area_driven += c.values[pc] > cutoff;
    for (const auto& c : undriven.cells) area_undriven += c.values[0] > cutoff;
    const bool ok = !driven.any_failed() && !undriven.any_failed() && lower >= -1e-7 && upper >= -1e-7 &&
                    area_driven < area_undriven;
    return {ok, "chain slack MI " + fmt("%.1e", lower) + ", S_coh+I_c " + fmt("%.1e", upper) + "; cells above " +
                    fmt("%.4f", cutoff) + ": driven " + std::to_string(area_driven) + " vs undriven " +
                    std::to_string(area_undriven) + " of 121"};
}

// Brute force over (q1, q2, θ1, θ2) with 64 points each; the objective is diag(u†ρu) · ln q.
Outcome omega_alpha_certification() {
    StateSampler sampler(88);
    constexpr int n = 64;
    const auto pair = kSpin1DrivenPair;
    const int k1 = 3 - pair.first - pair.second;
    double worst = -1e300, substitution = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const DensityMatrix r = sampler.random_density({3});
        const OmegaAlpha w = omega_alpha(r, pair);

        std::vector<std::array<double, 3>> diag;
        diag.reserve(n * n);
        PartialCoherentParams p;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                p.theta1 = (a + 0.5) / n * std::numbers::pi;
                p.theta2 = (b + 0.5) / n * std::numbers::pi;
                const ComplexMatrix u = pair_rotation(p, pair);
                const ComplexMatrix m = u.adjoint() * r.matrix() * u;
                diag.push_back({m(0, 0).real(), m(1, 1).real(), m(2, 2).real()});
            }
        double brute = -1e300;
        for (int i = 0; i < n; ++i) {
            const double q1 = (i + 0.5) / n;
            for (int j = 0; j < n; ++j) {
                double lq[3];
                const double qa = (1.0 - q1) * (j + 0.5) / n;
                lq[k1] = std::log(q1);
                lq[pair.first] = std::log(qa);
                lq[pair.second] = std::log(1.0 - q1 - qa);
                for (const auto& dd : diag) brute = std::max(brute, dd[0] * lq[0] + dd[1] * lq[1] + dd[2] * lq[2]);
            }
        }
        worst = std::max(worst, brute - w.value);

        const double phi = std::arg(r(pair.first, pair.second));
        const double t1 = std::numbers::pi / 2.0 - phi / 2.0;
        const double dt1 = std::remainder(w.params.theta1 - t1, std::numbers::pi);
        substitution = std::max({substitution, std::abs(w.params.q(k1) - r(k1, k1).real()), std::abs(dt1)});
    }
    return {worst <= 1e-6 && substitution <= 1e-12,
            "brute force (64 points per free parameter) exceeds optimizer by at most " + fmt("%.2e", worst) +
                "; substituted q1, theta1 deviate by " + fmt("%.1e", substitution)};
}

Outcome rk4_cross_check() {
    const auto t0 = Clock::now();
    std::ostringstream d;
    bool ok = true;
    for (const auto& type : model_types()) {
        const BuiltModel m = build_model(*make_model(type));
        const Superoperator l = m.liouvillian();
        const Index dim = m.hamiltonian.rows();
        // ∞-norm bounds the spectral radius; RK4 is stable for |hλ| below about 2.7.
        const double dt = 1.0 / l.matrix.cwiseAbs().rowwise().sum().maxCoeff();
        const DensityMatrix mixed(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), m.dims);
        const DensityMatrix late = evolve_rk4(mixed, l, 50.0 / m.reference_rate, dt);
        const double dist = trace_norm_hermitian(late.matrix() - steady_state(l).matrix());
        ok = ok && dist < 1e-5;
        d << type << " " << fmt("%.1e", dist) << "; ";
    }
    d << fmt("%.1f", seconds_since(t0)) << " s";
    return {ok, d.str()};
}

Outcome truncation_convergence() {
    bool ok = true;
    std::ostringstream d;
    for (const auto& [what, delta] : truncation.entries) {
        ok = ok && delta <= kConvergenceTol;
        d << what << " " << fmt("%.2e", delta) << "; ";
    }
    std::string s = d.str();
    if (s.size() >= 2) s.resize(s.size() - 2);
    return {ok && !truncation.entries.empty(), s};
}

Outcome cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / ("qsync_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path cfg = dir / "sweep.json";
    std::ofstream(cfg) << R"({"schema_version": "1",
        "model": {"type": "coupled_driven_spin1", "params": {"epsilon": 0.05}},
        "sweep": {"axis1": {"param": "g", "min": 0.05, "max": 0.5, "count": 4},
                  "axis2": {"param": "delta", "min": -1, "max": 1, "count": 5}},
        "measures": ["omega_r", {"id": "omega_r", "class": "partially_coherent_product"}, "omega_d",
                     {"id": "oracle_min", "class": "marginal_product", "samples": 200}, "s_phase"]})";
    auto run = [&](int workers, const std::string& name) {
        const fs::path out = dir / name;
        const std::string cmd = std::string(QSYNC_CLI_PATH) + " sweep --config " + cfg.string() + " --seed 42" +
                                " --workers " + std::to_string(workers) + " --out " + out.string();
        const int status = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return std::make_pair(WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str());
    };
    const auto a = run(1, "w1.csv"), b = run(1, "w1_again.csv"), c = run(2, "w2.csv"), e = run(4, "w4.csv");
    fs::remove_all(dir);
    const bool same = a.second == b.second && a.second == c.second && a.second == e.second;
    return {a.first == 0 && !a.second.empty() && same,
            "exit " + std::to_string(a.first) + ", " + std::to_string(a.second.size()) +
                " bytes, identical across two runs at workers 1 and at workers 2 and 4: " + (same ? "yes" : "no")};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 closed-form certification", closed_forms},
        {"2 relative entropy decomposition", decomposition},
        {"3 trace-distance bound", trace_distance_bound},
        {"4 undriven limit cycles", undriven_limit},
        {"5 Arnold tongues", arnold_tongues},
        {"6 coupled spins and hybrid", coupled_systems},
        {"7 partially coherent class", partially_coherent},
        {"8 omega_alpha optimizer", omega_alpha_certification},
        {"9 RK4 cross-validation", rk4_cross_check},
        {"10 truncation convergence", truncation_convergence},
        {"11 CLI determinism", cli_determinism},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

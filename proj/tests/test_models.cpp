#include <doctest.h>

#include <cmath>

#include "qsync/errors.hpp"
#include "qsync/infomeasures.hpp"
#include "qsync/models.hpp"
#include "support.hpp"

using namespace qsync;
using namespace qsync::testing;

namespace {

DensityMatrix solve(const ModelSpec& spec) { return steady_state(build_model(spec).liouvillian()); }

double max_offdiag(const DensityMatrix& r) {
    ComplexMatrix m = r.matrix();
    m.diagonal().setZero();
    return max_abs(m);
}

} // namespace

TEST_SUITE("models") {

TEST_CASE("every model builds with a Hermitian Hamiltonian") {
    for (const auto& type : model_types()) {
        CAPTURE(type);
        const auto spec = make_model(type);
        REQUIRE(spec);
        CHECK(model_type(*spec) == type);
        const BuiltModel m = build_model(*spec);
        CHECK(is_hermitian(m.hamiltonian, 1e-12));
        CHECK(product(m.dims) == m.hamiltonian.rows());
        CHECK(m.reference_rate > 0.0);
        CHECK(m.boson_sites.empty() != has_oscillator(*spec));
    }
    CHECK_FALSE(make_model("tavis_cummings"));
}

TEST_CASE("model dimensions") {
    CHECK(build_model(DrivenVdp{}).dims == Dims{20});
    CHECK(build_model(CoupledVdpCoherent{}).dims == Dims{6, 6});
    CHECK(build_model(DrivenSpin1{}).dims == Dims{3});
    CHECK(build_model(CoupledDrivenSpin1{}).dims == Dims{3, 3});
    CHECK(build_model(HybridVdpSpin1{}).dims == Dims{10, 3});
    CHECK(build_model(HybridVdpSpin1{}).spin_sites == std::vector<int>{1});
}

TEST_CASE("parameter reflection") {
    ModelSpec m = DrivenVdp{};
    CHECK(parameter_names(m) == std::vector<std::string>{"delta", "epsilon", "gamma_g", "gamma_d", "n_fock"});
    CHECK(*get_parameter(m, "epsilon") == 0.5);
    CHECK(set_parameter(m, "epsilon", 0.25));
    CHECK(std::get<DrivenVdp>(m).epsilon == 0.25);
    CHECK(set_parameter(m, "n_fock", 11.6));
    CHECK(std::get<DrivenVdp>(m).n_fock == 12);
    CHECK(is_integer_parameter(m, "n_fock"));
    CHECK_FALSE(is_integer_parameter(m, "delta"));
    CHECK_FALSE(set_parameter(m, "g", 1.0));
    CHECK_FALSE(get_parameter(m, "g"));

    const ModelSpec larger = with_larger_cutoff(CoupledVdpDissipative{}, 4);
    CHECK(std::get<CoupledVdpDissipative>(larger).n_fock_1 == 10);
    CHECK(std::get<CoupledVdpDissipative>(larger).n_fock_2 == 10);
    CHECK(std::get<HybridVdpSpin1>(without_drive(HybridVdpSpin1{})).epsilon == 0.0);
}

TEST_CASE("invariant violations name the parameter") {
    DrivenVdp v;
    v.gamma_d = -1.0;
    const auto issues = validate_model(v);
    REQUIRE_FALSE(issues.empty());
    CHECK(issues.front().rfind("gamma_d", 0) == 0);
    CHECK_THROWS_AS(build_model(v), ContractViolation);

    CoupledSpin1 c;
    c.gamma_g_b = 0.0;
    CHECK_FALSE(validate_model(c).empty());

    HybridVdpSpin1 h;
    h.n_fock = 1;
    CHECK_FALSE(validate_model(h).empty());
}

TEST_CASE("default cutoff rule") {
    CHECK(default_cutoff(1.0, 10.0) == 10);
    CHECK(default_cutoff(1.0, 0.5) == 20);
    CHECK(default_cutoff(1.0, 1.0) == 20);
}

TEST_CASE("steady-state values agree with an independent implementation") {
    // Reference numbers from tests/oracles/freeze_values.py (row-major generator, SVD null space).
    const double tol = 1e-9;
    const DensityMatrix vdp = solve(DrivenVdp{});
    CHECK(s_coh(vdp) == doctest::Approx(0.4016695087999278).epsilon(tol));
    CHECK(expectation(vdp, boson_ops(20).number).real() == doctest::Approx(1.921923364676398).epsilon(tol));
    CHECK(c1_measure(vdp, 0) == doctest::Approx(0.6481753158560164).epsilon(tol));

    const DensityMatrix spin = solve(DrivenSpin1{});
    CHECK(s_coh(spin) == doctest::Approx(0.223073295829205).epsilon(tol));
    CHECK(l1_coherence(spin) == doctest::Approx(0.5499480270936892).epsilon(tol));
    CHECK(std::abs(spin(1, 0)) == doctest::Approx(0.026111771831113254).epsilon(tol));

    const DensityMatrix cs = solve(CoupledSpin1{});
    CHECK(s_coh(cs) == doctest::Approx(0.2348256473163911).epsilon(tol));
    CHECK(mutual_information(cs) == doctest::Approx(0.2966695086046772).epsilon(tol));

    const DensityMatrix cds = solve(CoupledDrivenSpin1{});
    CHECK(s_coh(cds) == doctest::Approx(0.2355123710306637).epsilon(tol));
    CHECK(mutual_information(cds) == doctest::Approx(0.2962896176021277).epsilon(tol));
    CHECK(classical_mutual_information(cds) == doctest::Approx(0.06163566094363404).epsilon(tol));

    CHECK(s_coh(solve(HybridVdpSpin1{})) == doctest::Approx(0.13612516423258425).epsilon(tol));
    CHECK(mutual_information(solve(CoupledVdpCoherent{})) == doctest::Approx(0.001906366978504881).epsilon(1e-7));
    CHECK(mutual_information(solve(CoupledVdpDissipative{})) == doctest::Approx(0.009474542743040715).epsilon(1e-7));
}

TEST_CASE("undriven and uncoupled models have diagonal steady states") {
    DrivenVdp v;
    v.epsilon = 0.0;
    CHECK(max_offdiag(solve(v)) < 1e-8);

    DrivenSpin1 s;
    s.epsilon = 0.0;
    const DensityMatrix rs = solve(s);
    CHECK(max_offdiag(rs) < 1e-8);
    CHECK(rs(1, 1).real() > 1.0 - 1e-8);

    CoupledVdpCoherent cc;
    cc.g = 0.0;
    CHECK(max_offdiag(solve(cc)) < 1e-8);
    CoupledVdpDissipative cd;
    cd.g = 0.0;
    CHECK(max_offdiag(solve(cd)) < 1e-8);
    CoupledSpin1 c1;
    c1.g = 0.0;
    CHECK(max_offdiag(solve(c1)) < 1e-8);
    CoupledDrivenSpin1 c2;
    c2.g = 0.0;
    c2.epsilon = 0.0;
    CHECK(max_offdiag(solve(c2)) < 1e-8);
    HybridVdpSpin1 h;
    h.epsilon = 0.0;
    CHECK(max_offdiag(solve(h)) < 1e-8);
}

TEST_CASE("detuning reversal conjugates the steady state") {
    for (double delta : {0.3, 1.1}) {
        DrivenVdp vp, vm;
        vp.delta = delta;
        vm.delta = -delta;
        vp.n_fock = vm.n_fock = 12;
        CHECK(max_abs(solve(vp).matrix() - solve(vm).matrix().conjugate()) < 1e-9);

        DrivenSpin1 sp, sm;
        sp.delta = delta;
        sm.delta = -delta;
        CHECK(max_abs(solve(sp).matrix() - solve(sm).matrix().conjugate()) < 1e-9);
    }
}

TEST_CASE("undriven oscillator population agrees with long-time integration") {
    DrivenVdp v;
    v.epsilon = 0.0;
    const Superoperator l = build_model(v).liouvillian();
    ComplexMatrix vac = ComplexMatrix::Zero(20, 20);
    vac(0, 0) = 1.0;
    const DensityMatrix late = evolve_rk4(DensityMatrix(vac), l, 50.0, 0.01);
    const ComplexMatrix n = boson_ops(20).number;
    CHECK(std::abs(expectation(late, n) - expectation(steady_state(l), n)) < 1e-6);
}

}

#include "doctest.h"
#include "riemcurv/errors.hpp"
#include "riemcurv/invariants.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace riemcurv;
using riemcurv::test::make_test_curve;
using riemcurv::test::random_vector;

namespace {

CurveJet random_test_jet(int m, int order, std::mt19937_64& rng, double base_scale = 0.4) {
    CurveJet jet;
    jet.t0 = 0.1;
    jet.coords = Mat::Zero(order + 1, m);
    jet.coords.row(0) = (base_scale * random_vector(m, rng)).transpose();
    for (int k = 1; k <= order; ++k)
        jet.coords.row(k) = random_vector(m, rng).transpose();
    return jet;
}

JetFunction coordinate_function(int i) {
    JetFunction f;
    f.arity = 0;
    f.label = "x^" + std::to_string(i + 1);
    f.eval = [i](const CurveJet& jet) { return jet.coords(0, i); };
    return f;
}

JetFunction time_function() {
    JetFunction f;
    f.arity = 0;
    f.label = "t";
    f.eval = [](const CurveJet& jet) { return jet.t0; };
    return f;
}

// coordinate bracket [X, Y]^i = X(Y^i) - Y(X^i) by central differences
VectorFieldFn field_bracket(const VectorFieldFn& X, const VectorFieldFn& Y, int m) {
    return [X, Y, m](const Vec& x) {
        const double h = 1e-5;
        Vec out = Vec::Zero(m);
        const Vec Xx = X(x), Yx = Y(x);
        Vec xs = x;
        for (int k = 0; k < m; ++k) {
            xs[k] = x[k] + h;
            const Vec Yp = Y(xs), Xp = X(xs);
            xs[k] = x[k] - h;
            const Vec Ym = Y(xs), Xm = X(xs);
            xs[k] = x[k];
            out += (Xx[k] * (Yp - Ym) - Yx[k] * (Xp - Xm)) / (2.0 * h);
        }
        return out;
    };
}

} // namespace

TEST_CASE("total derivative of a coordinate is the next jet coordinate") {
    std::mt19937_64 rng(3);
    const CurveJet jet = random_test_jet(3, 2, rng);
    for (int i = 0; i < 3; ++i) {
        const JetFunction dtf = total_derivative(coordinate_function(i));
        CHECK(dtf.eval(jet) == doctest::Approx(jet.coords(1, i)).epsilon(1e-8));
    }
    CHECK(total_derivative(time_function()).eval(jet) == doctest::Approx(1.0));
}

TEST_CASE("total derivative of Delta_1 on the flat plane") {
    // f = x1^2 + y1^2, D_t f = 2 (x1 x2 + y1 y2)
    JetFunction f;
    f.arity = 1;
    f.eval = [](const CurveJet& jet) {
        return jet.coords(1, 0) * jet.coords(1, 0) + jet.coords(1, 1) * jet.coords(1, 1);
    };
    std::mt19937_64 rng(5);
    const CurveJet jet = random_test_jet(2, 2, rng);
    const double expected =
        2.0 * (jet.coords(1, 0) * jet.coords(2, 0) + jet.coords(1, 1) * jet.coords(2, 1));
    CHECK(total_derivative(f).eval(jet) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("total derivative satisfies the Leibniz rule") {
    std::mt19937_64 rng(7);
    JetFunction f;
    f.arity = 1;
    f.eval = [](const CurveJet& jet) {
        return jet.coords(0, 0) * jet.coords(1, 1) + 0.3 * jet.coords(1, 0);
    };
    JetFunction g;
    g.arity = 1;
    g.eval = [](const CurveJet& jet) {
        return std::sin(jet.coords(0, 1)) + jet.coords(1, 0) * jet.coords(1, 1);
    };
    JetFunction fg;
    fg.arity = 1;
    fg.eval = [f, g](const CurveJet& jet) { return f.eval(jet) * g.eval(jet); };

    for (int trial = 0; trial < 5; ++trial) {
        const CurveJet jet = random_test_jet(2, 2, rng);
        const double lhs = total_derivative(fg).eval(jet);
        const double rhs = f.eval(jet) * total_derivative(g).eval(jet) +
                           g.eval(jet) * total_derivative(f).eval(jet);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    }
}

TEST_CASE("prolongation of a translation fills only the zero slot") {
    const Preset p = load_preset("euclidean", {{"m", 3}});
    std::mt19937_64 rng(11);
    const CurveJet jet = random_test_jet(3, 3, rng);
    const Mat slots = prolong(p.killing[0], 3, 3).eval(jet); // T1
    CHECK(slots(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(slots.block(1, 0, 3, 3).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("prolongation of a rotation shifts the jet coordinates") {
    // R12 = x^2 d_1 - x^1 d_2 prolongs with slot j = (x_j^2, -x_j^1, 0)
    const Preset p = load_preset("euclidean", {{"m", 3}});
    std::mt19937_64 rng(13);
    const CurveJet jet = random_test_jet(3, 3, rng);
    const int r12 = 3; // after T1, T2, T3 in the basis ordering
    const Mat slots = prolong(p.killing[r12], 3, 3).eval(jet);
    for (int j = 0; j <= 3; ++j) {
        CHECK(slots(j, 0) == doctest::Approx(jet.coords(j, 1)).epsilon(1e-9));
        CHECK(slots(j, 1) == doctest::Approx(-jet.coords(j, 0)).epsilon(1e-9));
        CHECK(std::abs(slots(j, 2)) < 1e-10);
    }
}

TEST_CASE("first prolongation of the g_kappa_tau rotation matches the closed form") {
    // X3^(1) = -y d_x + x d_y - y_1 d_{x_1} + x_1 d_{y_1}
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    std::mt19937_64 rng(17);
    const CurveJet jet = random_test_jet(3, 1, rng);
    const Mat slots = prolong(p.killing[2], 1, 3).eval(jet);
    CHECK(slots(0, 0) == doctest::Approx(-jet.coords(0, 1)).epsilon(1e-10));
    CHECK(slots(0, 1) == doctest::Approx(jet.coords(0, 0)).epsilon(1e-10));
    CHECK(std::abs(slots(0, 2)) < 1e-12);
    CHECK(slots(1, 0) == doctest::Approx(-jet.coords(1, 1)).epsilon(1e-10));
    CHECK(slots(1, 1) == doctest::Approx(jet.coords(1, 0)).epsilon(1e-10));
    CHECK(std::abs(slots(1, 2)) < 1e-12);
}

TEST_CASE("dropping the top slot of a prolongation gives the lower prolongation") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    std::mt19937_64 rng(19);
    for (const auto& field : p.killing) {
        const CurveJet jet = random_test_jet(3, 3, rng);
        const Mat high = prolong(field, 3, 3).eval(jet);
        CurveJet lower = jet;
        lower.coords = jet.coords.topRows(3);
        const Mat low = prolong(field, 2, 3).eval(lower);
        CHECK((high.topRows(3) - low).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("prolongation commutes with the field bracket") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    std::mt19937_64 rng(23);
    const int r = 2;
    const CurveJet jet = random_test_jet(3, r, rng);

    for (auto [a, b] : {std::pair<int, int>{0, 1}, {0, 2}, {1, 2}, {2, 3}}) {
        // bracket of the prolonged fields via directional differences in jet space
        auto prolonged = [&](int q, const CurveJet& at) {
            return prolong(p.killing[q], r, 3).eval(at);
        };
        auto directional = [&](int q, const Mat& dir) {
            const double h = 1e-5;
            CurveJet jp = jet, jm = jet;
            jp.coords += h * dir;
            jm.coords -= h * dir;
            return Mat(((prolonged(q, jp) - prolonged(q, jm)) / (2.0 * h)).eval());
        };
        const Mat va = prolonged(a, jet);
        const Mat vb = prolonged(b, jet);
        const Mat bracket_prolonged = directional(b, va) - directional(a, vb);

        const Mat prolonged_bracket =
            prolong(field_bracket(p.killing[a], p.killing[b], 3), r, 3).eval(jet);
        CHECK((bracket_prolonged - prolonged_bracket).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("euclidean distribution ranks at Frenet jets") {
    const Preset p = load_preset("euclidean", {{"m", 3}});
    std::mt19937_64 rng(29);
    const CurveJet jet = random_jet(p, 3, rng, true);
    CHECK(distribution_rank(p.killing, 3, jet, 0) == 3);
    CHECK(distribution_rank(p.killing, 3, jet, 1) == 5);
    CHECK(distribution_rank(p.killing, 3, jet, 2) == 6);
    CHECK(distribution_rank(p.killing, 3, jet, 3) == 6);
}

TEST_CASE("g_kappa_tau distribution has rank 4 at immersive 1-jets") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    const RankEstimate est = estimate_distribution_rank(p, 1, 40, 31);
    CHECK(est.modal_rank == 4);
    CHECK(est.stability >= 0.95);
    CHECK(est.n_r == 3);
}

TEST_CASE("transitive presets have full rank at order zero") {
    for (const char* name : {"euclidean", "sphere", "g_kappa_tau", "solvable_group"}) {
        const Preset p = load_preset(name, {});
        const RankEstimate est = estimate_distribution_rank(p, 0, 25, 37);
        CHECK(est.modal_rank == p.chart.dim());
        CHECK(est.n_r == 1);
    }
}

TEST_CASE("euclidean m=3 invariant counts") {
    const Preset p = load_preset("euclidean", {{"m", 3}});
    const auto rows = stability_and_counts(p, 4, 40, 41);
    // N_r = 1 + binom(r+1, 2) up to r = m-1, then (r+1)m + 1 - dim i = 3r - 2
    CHECK(rows[0].n_r == 1);
    CHECK(rows[1].n_r == 2);
    CHECK(rows[2].n_r == 4);
    CHECK(rows[3].n_r == 7);
    CHECK(rows[4].n_r == 10);
    // k table: one new invariant at each order 1..3 (kappa_0, kappa_1, kappa_2)
    CHECK(rows[0].k_r == 0);
    CHECK(rows[1].k_r == 1);
    CHECK(rows[2].k_r == 1);
    CHECK(rows[3].k_r == 1);
    CHECK(rows[4].k_r == 0);
    int sum = 0;
    for (const auto& row : rows) sum += row.k_r;
    CHECK(sum == 3);
    for (const auto& row : rows) CHECK(!row.flagged);
}

TEST_CASE("g_kappa_tau invariant counts: N_r = 3r and k = (0, 2, 1)") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    const auto rows = stability_and_counts(p, 4, 40, 43);
    CHECK(rows[0].n_r == 1);
    for (int r = 1; r <= 4; ++r) CHECK(rows[r].n_r == 3 * r);
    CHECK(rows[0].k_r == 0);
    CHECK(rows[1].k_r == 2);
    CHECK(rows[2].k_r == 1);
    CHECK(rows[3].k_r == 0);
    CHECK(rows[4].k_r == 0);
}

TEST_CASE("sum of the k table equals the dimension on every preset") {
    for (const char* name :
         {"euclidean", "sphere", "torus_example1", "g_kappa_tau", "solvable_group"}) {
        const Preset p = load_preset(name, {});
        const int m = p.chart.dim();
        const auto rows = stability_and_counts(p, m + 1, 40, 47);
        int sum = 0;
        for (const auto& row : rows) sum += row.k_r;
        CHECK(sum == m);
    }
}

TEST_CASE("asymptotic counts match (r+1)m + 1 - dim i for r >= m-1") {
    for (const char* name :
         {"euclidean", "sphere", "torus_example1", "g_kappa_tau", "solvable_group"}) {
        const Preset p = load_preset(name, {});
        const int m = p.chart.dim();
        const int dim_i = p.dim_isometry();
        const auto rows = stability_and_counts(p, m + 1, 40, 53);
        for (int r = m - 1; r <= m + 1; ++r)
            CHECK(rows[r].n_r == (r + 1) * m + 1 - dim_i);
    }
}

TEST_CASE("invariance check: t is invariant, coordinates are not") {
    const Preset p = load_preset("euclidean", {{"m", 2}});
    std::mt19937_64 rng(59);
    std::vector<CurveJet> jets;
    for (int i = 0; i < 10; ++i) jets.push_back(random_test_jet(2, 1, rng));
    CHECK(invariance_check(time_function(), p.killing, 2, jets) < 1e-12);

    // x^1 is moved at unit rate by the translation T1
    JetFunction x1 = coordinate_function(0);
    const double drift = invariance_check(x1, {p.killing[0]}, 2, jets);
    CHECK(drift == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("total derivatives of invariants stay invariant") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    const auto fs = homogeneous3_invariant_functions(p);
    std::mt19937_64 rng(61);
    std::vector<CurveJet> jets;
    for (int i = 0; i < 20; ++i) jets.push_back(random_jet(p, 2, rng));
    for (const auto& f : fs) {
        CHECK(invariance_check(f, p.killing, 3, jets) < 1e-6);
        const JetFunction df = total_derivative(f);
        CHECK(invariance_check(df, p.killing, 3, jets) < 1e-5);
    }
}

TEST_CASE("euclidean curvature derivatives are a basis of full rank N_m") {
    const Preset p = load_preset("euclidean", {{"m", 3}});
    std::vector<JetFunction> fs;
    fs.push_back(time_function());
    for (int i = 0; i < 3; ++i)
        for (int h = 0; h + i <= 2; ++h)
            fs.push_back(dt_iterated(kappa_function(p.chart, i), h));
    REQUIRE(fs.size() == 7); // N_3 = 1 + m(m+1)/2

    std::mt19937_64 rng(67);
    int full = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const CurveJet jet = random_jet(p, 3, rng, true);
        const Mat jac = jet_jacobian(fs, jet);
        if (numerical_rank(jac, 1e-8) == 7) ++full;
    }
    CHECK(full == 5);
}

TEST_CASE("surface invariants vanish on the flat plane except the speed") {
    const Preset p = load_preset("euclidean", {{"m", 2}});
    std::mt19937_64 rng(71);
    const CurveJet jet = random_test_jet(2, 1, rng);
    const Vec iv = surface_invariants(p.chart, jet, p.gaussian_curvature);
    const double speed2 = jet.velocity().squaredNorm();
    CHECK(iv[0] == doctest::Approx(speed2).epsilon(1e-12));
    CHECK(std::abs(iv[1]) < 1e-12);
    CHECK(std::abs(iv[2]) < 1e-12);
    CHECK(std::abs(iv[3]) < 1e-12);
}

TEST_CASE("surface invariant I2 along a torus meridian is the curvature slope") {
    const Preset p = load_preset("torus_example1", {});
    CurveJet jet;
    jet.t0 = 0.0;
    jet.coords = Mat::Zero(2, 2);
    jet.coords(0, 0) = 0.9; // theta_0
    jet.coords(0, 1) = 0.4;
    jet.coords(1, 0) = 1.0; // unit-speed meridian direction
    const Vec iv = surface_invariants(p.chart, jet, p.gaussian_curvature);
    const double theta = 0.9;
    const double expected = -2.0 * std::sin(theta) / std::pow(2.0 + std::cos(theta), 2);
    CHECK(iv[1] == doctest::Approx(expected).epsilon(1e-6));
    CHECK(std::abs(iv[2]) < 1e-8); // dK has no phi component
}

TEST_CASE("surface invariants are functionally independent on a perturbed metric") {
    const Preset p = load_preset("perturbed_surface", {{"eps", 0.05}, {"seed", 3}});
    const auto fs = surface_invariant_functions(p.chart, p.gaussian_curvature);
    std::mt19937_64 rng(73);
    int full = 0, total = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const CurveJet jet = random_jet(p, 1, rng);
        const Mat jac = jet_jacobian(fs, jet);
        ++total;
        if (numerical_rank(jac, 1e-8) == 4) ++full;
    }
    CHECK(full >= 9);

    // constant-curvature control: everything built from K degenerates
    const Preset sph = load_preset("sphere", {{"k", 1.0}, {"m", 2}});
    const auto gs = surface_invariant_functions(sph.chart, sph.gaussian_curvature);
    const CurveJet jet = random_jet(sph, 1, rng);
    CHECK(numerical_rank(jet_jacobian(gs, jet), 1e-8) < 4);
}

TEST_CASE("homogeneous 3-manifold invariants at distinguished jets") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});

    // vertical curve (0, 0, t): I1 = 1, kappa~_0 = 0
    CurveJet vertical;
    vertical.t0 = 0.0;
    vertical.coords = Mat::Zero(3, 3);
    vertical.coords(1, 2) = 1.0;
    vertical.coords(2, 0) = 0.2; // bend it so kappa_1 exists
    const Vec iv = homogeneous3_invariants(p, vertical);
    CHECK(iv[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(iv[1]) < 1e-12);

    // horizontal unit-speed jet at the origin with z1 = 0:
    // kappa~_0 = x1^2 + y1^2
    CurveJet horizontal;
    horizontal.t0 = 0.0;
    horizontal.coords = Mat::Zero(3, 3);
    horizontal.coords(1, 0) = 0.6;
    horizontal.coords(1, 1) = 0.8;
    horizontal.coords(2, 2) = 0.3;
    const Vec ih = homogeneous3_invariants(p, horizontal);
    CHECK(ih[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ih[1] == doctest::Approx(0.6 * 0.6 + 0.8 * 0.8).epsilon(1e-12));
}

TEST_CASE("homogeneous 3-manifold invariants are annihilated by the Killing basis") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    const auto fs = homogeneous3_invariant_functions(p);
    std::mt19937_64 rng(79);
    std::vector<CurveJet> jets;
    for (int i = 0; i < 100; ++i) jets.push_back(random_jet(p, 1, rng));
    for (const auto& f : fs) CHECK(invariance_check(f, p.killing, 3, jets) < 1e-6);
}

TEST_CASE("maurer-cartan invariants on the solvable group") {
    const Preset p = load_preset("solvable_group", {{"nu", 1.0}});

    CurveJet along_x;
    along_x.t0 = 0.0;
    along_x.coords = Mat::Zero(2, 3);
    along_x.coords(1, 0) = 1.0; // sigma(t) = (t, 0, 0)
    const Vec i1 = maurer_cartan_invariants(p, along_x);
    CHECK(i1[0] == doctest::Approx(1.0));
    CHECK(i1[1] == doctest::Approx(0.0));
    CHECK(i1[2] == doctest::Approx(0.0));

    CurveJet along_y;
    along_y.t0 = 0.0;
    along_y.coords = Mat::Zero(2, 3);
    along_y.coords(0, 2) = 1.0; // z = 1
    along_y.coords(1, 1) = 1.0; // sigma(t) = (0, t, 1)
    const Vec i2 = maurer_cartan_invariants(p, along_y);
    CHECK(i2[0] == doctest::Approx(0.0));
    CHECK(i2[1] == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(i2[2] == doctest::Approx(0.0));
}

TEST_CASE("maurer-cartan traces are unchanged by left translation") {
    const Preset p = load_preset("solvable_group", {{"nu", 1.0}});
    const CurveProvider curve = make_test_curve({
        {{{0.4, 1.1, 0.3}}, {0.1}},
        {{{0.5, 0.9, 1.0}}, {}},
        {{{0.2, 0.6, 0.7}}, {0.0, 0.2}},
    });
    // left translation by (a, b, c): (x, y, z) -> (a + e^c x, b + e^{-c} y, c + z)
    const double a = 0.3, b = -0.2, c = 0.4;
    auto jets = [curve, a, b, c](double t, int order) {
        CurveJet j = curve.jet(t, order);
        j.coords.col(0) *= std::exp(c);
        j.coords.col(1) *= std::exp(-c);
        j.coords(0, 0) += a;
        j.coords(0, 1) += b;
        j.coords(0, 2) += c;
        return j;
    };
    const CurveProvider moved([jets](double t) { return jets(t, 0).point(); }, jets, 3);
    for (double t : {-0.5, 0.0, 0.7}) {
        const Vec ia = maurer_cartan_invariants(p, curve.jet(t, 1));
        const Vec ib = maurer_cartan_invariants(p, moved.jet(t, 1));
        CHECK((ia - ib).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("jet functions only read coordinates up to their declared order") {
    const Preset p = load_preset("g_kappa_tau", {{"kappa", 1.0}, {"tau", 0.5}});
    const auto fs = homogeneous3_invariant_functions(p);
    std::mt19937_64 rng(83);
    CurveJet jet = random_jet(p, 3, rng);
    CurveJet sub;
    sub.t0 = jet.t0;
    sub.coords = jet.coords.topRows(2);
    for (const auto& f : fs) {
        const double base = f.eval(sub);
        CurveJet perturbed = jet;
        perturbed.coords.row(3) += 10.0 * random_vector(3, rng).transpose();
        CurveJet sub2;
        sub2.t0 = perturbed.t0;
        sub2.coords = perturbed.coords.topRows(2);
        CHECK(f.eval(sub2) == doctest::Approx(base));
    }
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "natconv/assembly.hpp"
#include "natconv/mms.hpp"

using namespace natconv;

namespace {

CoupledState random_state(const Mesh& m, std::mt19937_64& rng, double scale = 1.0)
{
    return unpack_interior(m, oracle::random_vector(2 * m.num_interior(), rng, scale));
}

double max_diff(const SparseMatrix& a, const SparseMatrix& b)
{
    return (oracle::dense(a) - oracle::dense(b)).cwiseAbs().maxCoeff();
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

std::vector<double> axpy(const std::vector<double>& x, double h, const std::vector<double>& d)
{
    std::vector<double> r = x;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += h * d[i];
    }
    return r;
}

}  // namespace

TEST(Element, HandComputedStiffnessOfReferenceTriangle)
{
    // Element matrix of a right triangle is [[1,-1/2,-1/2],[-1/2,1/2,0],[-1/2,0,1/2]] for any h.
    const ElementGeometry g = triangle_geometry({0, 0}, {0.25, 0}, {0, 0.25});
    const double expect[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            EXPECT_DOUBLE_EQ(element::stiffness(g, a, b), expect[a][b]);
        }
    }
}

TEST(Element, MassMatrixOfRightTriangle)
{
    const ElementGeometry g = triangle_geometry({0, 0}, {0.5, 0}, {0, 0.5});
    // Exact integrals of barycentric products via the degree-2 moments
    // int l_a l_b = area (1 + delta_ab) / 12.
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            EXPECT_DOUBLE_EQ(element::mass(g, a, b), 0.125 / 12 * (a == b ? 2 : 1));
        }
    }
}

TEST(Stiffness, TwoByTwoCentreRowIsFivePoint)
{
    const Mesh m = build_structured_mesh(2);
    const SparseMatrix k = assemble_stiffness(m);
    EXPECT_DOUBLE_EQ(k.at(4, 4), 4.0);
    for (int nb : {1, 3, 5, 7}) {
        EXPECT_DOUBLE_EQ(k.at(4, nb), -1.0);
    }
    for (int diag : {0, 2, 6, 8}) {
        EXPECT_EQ(k.at(4, diag), 0.0);
    }
}

TEST(Stiffness, FivePointStencilOnEveryInteriorRow)
{
    for (int n : {4, 5, 7, 32}) {
        const Mesh m = build_structured_mesh(n);
        const SparseMatrix k = assemble_stiffness(m);
        // Exact for dyadic n; otherwise node coordinates i/n carry rounding.
        const double tol = (n & (n - 1)) == 0 ? 0.0 : 1e-15;
        for (int node : m.interior_nodes()) {
            const int i = node % (n + 1);
            const int j = node / (n + 1);
            EXPECT_NEAR(k.at(node, node), 4.0, 4 * tol);
            for (int nb : {m.node_index(i - 1, j), m.node_index(i + 1, j), m.node_index(i, j - 1),
                           m.node_index(i, j + 1)}) {
                EXPECT_NEAR(k.at(node, nb), -1.0, 4 * tol);
            }
            EXPECT_NEAR(k.at(node, m.node_index(i + 1, j + 1)), 0.0, 4 * tol);
            EXPECT_NEAR(k.at(node, m.node_index(i - 1, j - 1)), 0.0, 4 * tol);
        }
    }
}

TEST(Stiffness, AnnihilatesConstants)
{
    const Mesh m = build_structured_mesh(9);
    const SparseMatrix k = assemble_stiffness(m);
    const std::vector<double> c(m.num_nodes(), 3.7);
    for (double v : spmv(k, c)) {
        EXPECT_NEAR(v, 0.0, 1e-13);
    }
}

TEST(Stiffness, EnergyOfSineInterpolant)
{
    const Mesh m = build_structured_mesh(32);
    const SparseMatrix k = assemble_stiffness(m);
    const Field v = interpolate_nodal(
        [](double x, double y) { return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y); }, m);
    const auto kv = spmv(k, v.coefficients());
    double e = 0.0;
    for (std::size_t i = 0; i < kv.size(); ++i) {
        e += v[i] * kv[i];
    }
    EXPECT_NEAR(e, std::numbers::pi * std::numbers::pi / 2, 0.01 * std::numbers::pi * std::numbers::pi / 2);
}

TEST(Stiffness, SymmetricPositiveOnInterior)
{
    const Mesh m = build_structured_mesh(6);
    const Eigen::MatrixXd k = oracle::dense(interior_block(assemble_stiffness(m), m));
    EXPECT_TRUE(k.isApprox(k.transpose(), 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Mass, EntriesSumToArea)
{
    const Mesh m = build_structured_mesh(7);
    const SparseMatrix mm = assemble_mass(m);
    double s = 0.0;
    for (double v : mm.values()) {
        s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    const std::vector<double> ones(m.num_nodes(), 1.0);
    const auto m1 = spmv(mm, ones);
    double q = 0.0;
    for (double v : m1) {
        q += v;
    }
    EXPECT_NEAR(q, 1.0, 1e-14);
}

TEST(Convection, InteriorBlockIsAntisymmetric)
{
    const Mesh m = build_structured_mesh(8);
    const Eigen::MatrixXd c = oracle::dense(interior_block(assemble_convection(m), m));
    EXPECT_LT((c + c.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Load, ConstantIntegratesToArea)
{
    const Mesh m = build_structured_mesh(5);
    for (int degree : {1, 2, 4, 6}) {
        const auto b = assemble_load(m, [](double, double) { return 1.0; }, degree);
        double s = 0.0;
        for (double v : b) {
            s += v;
        }
        EXPECT_NEAR(s, 1.0, 1e-14);
    }
}

TEST(Load, MatchesMassTimesInterpolantForLinears)
{
    const Mesh m = build_structured_mesh(6);
    auto f = [](double x, double y) { return 1.0 + 2.0 * x - 0.5 * y; };
    const auto b = assemble_load(m, f, 2);
    const auto mb = spmv(assemble_mass(m), interpolate_nodal(f, m).coefficients());
    EXPECT_LT(max_diff(b, mb), 1e-15);
}

TEST(Residual, ZeroStateZeroSources)
{
    const Mesh m = build_structured_mesh(6);
    ProblemParams p{3.0, [](double, double) { return 0.0; }, [](double, double) { return 0.0; }};
    for (double v : assemble_residual(CoupledState(m), p, m)) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Residual, ZeroStateIsNegativeLoad)
{
    const Mesh m = build_structured_mesh(8);
    const ProblemParams p = convection_benchmark().problem(10.0);
    const auto r = assemble_residual(CoupledState(m), p, m);
    const auto b1 = assemble_load(m, p.f1);
    const auto b2 = assemble_load(m, p.f2);
    const std::size_t ni = m.num_interior();
    for (std::size_t k = 0; k < ni; ++k) {
        const auto node = static_cast<std::size_t>(m.interior_nodes()[k]);
        EXPECT_EQ(r[k], -b1[node]);
        EXPECT_EQ(r[ni + k], -b2[node]);
    }
}

TEST(Residual, InterpolantResidualShrinksWithH)
{
    const ProblemParams p = convection_benchmark().problem(10.0);
    double prev = 0.0;
    for (int n : {16, 32}) {
        const Mesh m = build_structured_mesh(n);
        const CoupledState u(interpolate_nodal(oracle::psi, m), interpolate_nodal(oracle::theta, m));
        const double r = oracle::norm2(assemble_residual(u, p, m));
        if (prev > 0.0) {
            EXPECT_GT(prev / r, 1.7);
        }
        prev = r;
    }
}

TEST(Residual, RejectsStateFromOtherMesh)
{
    const Mesh a = build_structured_mesh(4);
    const Mesh b = build_structured_mesh(5);
    const ProblemParams p = convection_benchmark().problem(1.0);
    EXPECT_THROW(assemble_residual(CoupledState(a), p, b), std::invalid_argument);
    EXPECT_THROW(assemble_tangent(CoupledState(a), p, b), std::invalid_argument);
}

TEST(Params, Validation)
{
    ProblemParams p = convection_benchmark().problem(1.0);
    EXPECT_NO_THROW(p.validate());
    p.rayleigh = -1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.rayleigh = std::nan("");
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.rayleigh = 1.0;
    p.f2 = nullptr;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Tangent, ZeroStateNoCouplingIsTwoLaplacians)
{
    const Mesh m = build_structured_mesh(5);
    const SparseMatrix t = assemble_tangent(CoupledState(m), 0.0, m);
    const Eigen::MatrixXd k = oracle::dense(interior_block(assemble_stiffness(m), m));
    const Eigen::MatrixXd d = oracle::dense(t);
    const auto ni = static_cast<Eigen::Index>(m.num_interior());
    EXPECT_LT((d.topLeftCorner(ni, ni) - k).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((d.bottomRightCorner(ni, ni) - k).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(d.topRightCorner(ni, ni).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(d.bottomLeftCorner(ni, ni).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Tangent, SingleInteriorNode)
{
    const Mesh m = build_structured_mesh(2);
    std::mt19937_64 rng(17);
    const SparseMatrix t = assemble_tangent(random_state(m, rng), 10.0, m);
    ASSERT_EQ(t.rows(), 2);
    // Only the centre is free; the hat function there is even in x about 0.5.
    EXPECT_DOUBLE_EQ(t.at(0, 0), 4.0);
    EXPECT_NEAR(t.at(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(t.at(1, 1), 4.0, 1e-15);
}

TEST(Tangent, MatchesFiniteDifferences)
{
    const Mesh m = build_structured_mesh(8);
    const ProblemParams p = convection_benchmark().problem(10.0);
    std::mt19937_64 rng(2024);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = oracle::random_vector(2 * m.num_interior(), rng);
        const auto d = oracle::random_vector(2 * m.num_interior(), rng);
        const CoupledState su = unpack_interior(m, u);
        const auto f0 = assemble_residual(su, p, m);
        const auto f1 = assemble_residual(unpack_interior(m, axpy(u, h, d)), p, m);
        const auto jd = spmv(assemble_tangent(su, p, m), d);
        std::vector<double> diff(jd.size());
        for (std::size_t i = 0; i < jd.size(); ++i) {
            diff[i] = (f1[i] - f0[i]) / h - jd[i];
        }
        EXPECT_LE(oracle::norm2(diff) / oracle::norm2(jd), 1e-5);
    }
}

TEST(Tangent, RemainderIsExactlyQuadratic)
{
    // F(u + h d) - F(u) - h DF(u) d = h^2 J(d_psi, d_theta) tested: E(h)/h^2 is
    // independent of h up to roundoff.
    const Mesh m = build_structured_mesh(8);
    const ProblemParams p = convection_benchmark().problem(7.0);
    std::mt19937_64 rng(8);
    const auto u = oracle::random_vector(2 * m.num_interior(), rng);
    const auto d = oracle::random_vector(2 * m.num_interior(), rng);
    const CoupledState su = unpack_interior(m, u);
    const auto f0 = assemble_residual(su, p, m);
    const auto jd = spmv(assemble_tangent(su, p, m), d);
    auto scaled_remainder = [&](double h) {
        const auto fh = assemble_residual(unpack_interior(m, axpy(u, h, d)), p, m);
        std::vector<double> e(fh.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = (fh[i] - f0[i] - h * jd[i]) / (h * h);
        }
        return e;
    };
    const auto e1 = scaled_remainder(0.5);
    const auto e2 = scaled_remainder(0.25);
    EXPECT_LT(max_diff(e1, e2), 1e-10 * (1.0 + oracle::norm2(e1)));
    EXPECT_GT(oracle::norm2(e1), 1e-3);
}

TEST(ReferenceAgreement, NodalMatrices)
{
    for (int n : {1, 2, 7, 16}) {
        const Mesh m = build_structured_mesh(n);
        EXPECT_LE(max_diff(assemble_stiffness(m), reference::assemble_stiffness(m)), 1e-13);
        EXPECT_LE(max_diff(assemble_mass(m), reference::assemble_mass(m)), 1e-13);
        EXPECT_LE(max_diff(assemble_convection(m), reference::assemble_convection(m)), 1e-13);
    }
}

TEST(ReferenceAgreement, ResidualTangentAndLoads)
{
    const ProblemParams p = convection_benchmark().problem(25.0);
    std::mt19937_64 rng(4);
    for (int n : {2, 5, 12}) {
        const Mesh m = build_structured_mesh(n);
        const CoupledState u = random_state(m, rng);
        EXPECT_LE(max_diff(assemble_residual(u, p, m), reference::assemble_residual(u, p, m)), 1e-13);
        EXPECT_LE(max_diff(assemble_tangent(u, p, m), reference::assemble_tangent(u, p, m)), 1e-13);
        EXPECT_LE(max_diff(assemble_load(m, p.f1), reference::assemble_load(m, p.f1)), 1e-13);
    }
}

TEST(Packing, RoundTripAndSubtract)
{
    const Mesh m = build_structured_mesh(4);
    std::mt19937_64 rng(1);
    const auto v = oracle::random_vector(2 * m.num_interior(), rng);
    const CoupledState s = unpack_interior(m, v);
    EXPECT_TRUE(s.boundary_is_zero());
    EXPECT_EQ(pack_interior(s), v);
    CoupledState t = s;
    subtract_interior(t, v);
    for (double x : pack_interior(t)) {
        EXPECT_EQ(x, 0.0);
    }
    EXPECT_THROW(unpack_interior(m, std::vector<double>(3)), std::invalid_argument);
}

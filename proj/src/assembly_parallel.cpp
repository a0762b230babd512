// Parallel assembly in two passes: element-local contributions computed
// independently per triangle, then each matrix/vector row gathers from its
// incident triangles. Rows are owned by exactly one thread, so no atomics are
// needed and the result does not depend on the thread count.

#include <algorithm>
#include <array>
#include <vector>

#include "assembly_detail.hpp"
#include "natconv/assembly.hpp"
#include "natconv/quadrature.hpp"

namespace natconv {

namespace {

using Local3x3 = std::array<double, 9>;

struct Pattern {
    std::vector<int> offsets;
    std::vector<int> columns;
};

int num_triangles(const Mesh& mesh) { return static_cast<int>(mesh.num_triangles()); }

std::vector<ElementGeometry> all_geometries(const Mesh& mesh)
{
    std::vector<ElementGeometry> geo(mesh.num_triangles());
    const int nt = num_triangles(mesh);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        geo[static_cast<std::size_t>(t)] = element_geometry(mesh, t);
    }
    return geo;
}

/// Sorted node neighbours (including the node itself) of every node; with
/// interior_only, only interior nodes and interior neighbours, in interior numbering.
std::vector<std::vector<int>> neighbours(const Mesh& mesh, bool interior_only)
{
    const int rows = static_cast<int>(interior_only ? mesh.num_interior() : mesh.num_nodes());
    std::vector<std::vector<int>> nbr(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        const int node = interior_only ? mesh.interior_nodes()[static_cast<std::size_t>(r)] : r;
        auto& list = nbr[static_cast<std::size_t>(r)];
        for (int t : mesh.incident_triangles(node)) {
            for (int v : mesh.triangle(t)) {
                const int c = interior_only ? mesh.interior_index(v) : v;
                if (c >= 0) {
                    list.push_back(c);
                }
            }
        }
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return nbr;
}

int find_in(const int* begin, const int* end, int value)
{
    return static_cast<int>(std::find(begin, end, value) - begin);
}

SparseMatrix gather_nodal(const Mesh& mesh, const std::vector<Local3x3>& locals)
{
    const auto nbr = neighbours(mesh, false);
    Pattern p;
    p.offsets.assign(nbr.size() + 1, 0);
    for (std::size_t i = 0; i < nbr.size(); ++i) {
        p.offsets[i + 1] = p.offsets[i] + static_cast<int>(nbr[i].size());
    }
    p.columns.reserve(static_cast<std::size_t>(p.offsets.back()));
    for (const auto& row : nbr) {
        p.columns.insert(p.columns.end(), row.begin(), row.end());
    }

    std::vector<double> values(p.columns.size(), 0.0);
    const int rows = static_cast<int>(mesh.num_nodes());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) {
        const int* cb = p.columns.data() + p.offsets[static_cast<std::size_t>(i)];
        const int* ce = p.columns.data() + p.offsets[static_cast<std::size_t>(i) + 1];
        double* row = values.data() + p.offsets[static_cast<std::size_t>(i)];
        for (int t : mesh.incident_triangles(i)) {
            const Triangle& tri = mesh.triangle(t);
            const int a = detail::local_index(tri, i);
            const Local3x3& local = locals[static_cast<std::size_t>(t)];
            for (int b = 0; b < 3; ++b) {
                row[find_in(cb, ce, tri[static_cast<std::size_t>(b)])] += local[static_cast<std::size_t>(3 * a + b)];
            }
        }
    }
    const int n = rows;
    return SparseMatrix(n, n, std::move(p.offsets), std::move(p.columns), std::move(values));
}

template <class Entry>
SparseMatrix assemble_nodal(const Mesh& mesh, Entry entry)
{
    const auto geo = all_geometries(mesh);
    std::vector<Local3x3> locals(mesh.num_triangles());
    const int nt = num_triangles(mesh);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        const ElementGeometry& g = geo[static_cast<std::size_t>(t)];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                locals[static_cast<std::size_t>(t)][static_cast<std::size_t>(3 * a + b)] = entry(g, a, b);
            }
        }
    }
    return gather_nodal(mesh, locals);
}

std::vector<double> gather_vector(const Mesh& mesh, const std::vector<std::array<double, 3>>& locals)
{
    std::vector<double> out(mesh.num_nodes(), 0.0);
    const int rows = static_cast<int>(mesh.num_nodes());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int t : mesh.incident_triangles(i)) {
            s += locals[static_cast<std::size_t>(t)][static_cast<std::size_t>(detail::local_index(mesh.triangle(t), i))];
        }
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

std::vector<double> interior_entries(const Mesh& mesh, const std::vector<double>& nodal)
{
    std::vector<double> out(mesh.num_interior());
    const auto interior = mesh.interior_nodes();
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = nodal[static_cast<std::size_t>(interior[k])];
    }
    return out;
}

std::vector<Vec2> all_gradients(const Field& f, const Mesh& mesh, const std::vector<ElementGeometry>& geo)
{
    std::vector<Vec2> grads(mesh.num_triangles());
    const int nt = num_triangles(mesh);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        const Triangle& tri = mesh.triangle(t);
        const ElementGeometry& g = geo[static_cast<std::size_t>(t)];
        Vec2 v;
        for (std::size_t a = 0; a < 3; ++a) {
            const double c = f[static_cast<std::size_t>(tri[a])];
            v.x += c * g.grad[a].x;
            v.y += c * g.grad[a].y;
        }
        grads[static_cast<std::size_t>(t)] = v;
    }
    return grads;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh)
{
    return assemble_nodal(mesh, [](const ElementGeometry& g, int a, int b) { return element::stiffness(g, a, b); });
}

SparseMatrix assemble_mass(const Mesh& mesh)
{
    return assemble_nodal(mesh, [](const ElementGeometry& g, int a, int b) { return element::mass(g, a, b); });
}

SparseMatrix assemble_convection(const Mesh& mesh)
{
    return assemble_nodal(mesh, [](const ElementGeometry& g, int a, int b) { return element::convection(g, a, b); });
}

std::vector<double> assemble_load(const Mesh& mesh, const ScalarFunction& f, int degree)
{
    const QuadratureRule& rule = quadrature_rule(degree);
    const auto geo = all_geometries(mesh);
    std::vector<std::array<double, 3>> locals(mesh.num_triangles());
    const int nt = num_triangles(mesh);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        locals[static_cast<std::size_t>(t)] = detail::local_load(mesh, t, geo[static_cast<std::size_t>(t)], f, rule);
    }
    return gather_vector(mesh, locals);
}

SourceLoads assemble_source_loads(const ProblemParams& params, const Mesh& mesh)
{
    params.validate();
    return {interior_entries(mesh, assemble_load(mesh, params.f1)),
            interior_entries(mesh, assemble_load(mesh, params.f2))};
}

std::vector<double> assemble_residual(const CoupledState& state, const ProblemParams& params, const Mesh& mesh)
{
    detail::check_state_mesh(state, mesh);
    return assemble_residual(state, params.rayleigh, assemble_source_loads(params, mesh), mesh);
}

std::vector<double> assemble_residual(const CoupledState& state, double rayleigh, const SourceLoads& loads,
                                      const Mesh& mesh)
{
    detail::check_state_mesh(state, mesh);
    const auto geo = all_geometries(mesh);
    const auto gp = all_gradients(state.psi, mesh, geo);
    const auto gt = all_gradients(state.theta, mesh, geo);

    std::vector<std::array<double, 3>> local_psi(mesh.num_triangles());
    std::vector<std::array<double, 3>> local_theta(mesh.num_triangles());
    const int nt = num_triangles(mesh);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        const auto ts = static_cast<std::size_t>(t);
        const ElementGeometry& g = geo[ts];
        const Triangle& tri = mesh.triangle(t);
        const double jac = element::jacobian_determinant(gp[ts], gt[ts]);
        const double phi_int = element::basis_integral(g);
        for (int a = 0; a < 3; ++a) {
            double kp = 0.0;
            double kt = 0.0;
            for (int b = 0; b < 3; ++b) {
                const auto nb = static_cast<std::size_t>(tri[static_cast<std::size_t>(b)]);
                kp += element::stiffness(g, a, b) * state.psi[nb];
                kt += element::stiffness(g, a, b) * state.theta[nb];
            }
            local_psi[ts][static_cast<std::size_t>(a)] = kp - rayleigh * gt[ts].x * phi_int;
            local_theta[ts][static_cast<std::size_t>(a)] = kt + jac * phi_int;
        }
    }

    const std::size_t m = mesh.num_interior();
    std::vector<double> r(2 * m);
    const auto interior = mesh.interior_nodes();
    const int rows = static_cast<int>(m);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < rows; ++k) {
        const int node = interior[static_cast<std::size_t>(k)];
        double sp = 0.0;
        double st = 0.0;
        for (int t : mesh.incident_triangles(node)) {
            const auto a = static_cast<std::size_t>(detail::local_index(mesh.triangle(t), node));
            sp += local_psi[static_cast<std::size_t>(t)][a];
            st += local_theta[static_cast<std::size_t>(t)][a];
        }
        r[static_cast<std::size_t>(k)] = sp - loads.f1[static_cast<std::size_t>(k)];
        r[m + static_cast<std::size_t>(k)] = st - loads.f2[static_cast<std::size_t>(k)];
    }
    return r;
}

SparseMatrix assemble_tangent(const CoupledState& state, const ProblemParams& params, const Mesh& mesh)
{
    params.validate();
    return assemble_tangent(state, params.rayleigh, mesh);
}

SparseMatrix assemble_tangent(const CoupledState& state, double rayleigh, const Mesh& mesh)
{
    detail::check_state_mesh(state, mesh);
    const auto geo = all_geometries(mesh);
    const auto gp = all_gradients(state.psi, mesh, geo);
    const auto gt = all_gradients(state.theta, mesh, geo);

    // Four element blocks: psi-psi, psi-theta, theta-psi, theta-theta.
    struct Blocks {
        Local3x3 pp, pt, tp, tt;
    };
    std::vector<Blocks> locals(mesh.num_triangles());
    const int nt = num_triangles(mesh);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < nt; ++t) {
        const auto ts = static_cast<std::size_t>(t);
        const ElementGeometry& g = geo[ts];
        Blocks& blk = locals[ts];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const auto e = static_cast<std::size_t>(3 * a + b);
                const double k = element::stiffness(g, a, b);
                blk.pp[e] = k;
                blk.pt[e] = -rayleigh * element::convection(g, a, b);
                blk.tp[e] = element::jterm_dpsi(g, gt[ts], a, b);
                blk.tt[e] = k + element::jterm_dtheta(g, gp[ts], a, b);
            }
        }
    }

    const auto nbr = neighbours(mesh, true);
    const int m = static_cast<int>(mesh.num_interior());
    // Row r and row m + r share the column set [nbr..., m + nbr...].
    std::vector<int> offsets(2 * static_cast<std::size_t>(m) + 1, 0);
    for (int r = 0; r < 2 * m; ++r) {
        const auto width = 2 * nbr[static_cast<std::size_t>(r % m)].size();
        offsets[static_cast<std::size_t>(r) + 1] = offsets[static_cast<std::size_t>(r)] + static_cast<int>(width);
    }
    std::vector<int> columns(static_cast<std::size_t>(offsets.back()));
    std::vector<double> values(columns.size(), 0.0);

#pragma omp parallel for schedule(static)
    for (int r = 0; r < m; ++r) {
        const auto& list = nbr[static_cast<std::size_t>(r)];
        const int width = static_cast<int>(list.size());
        for (int half = 0; half < 2; ++half) {
            int* cols = columns.data() + offsets[static_cast<std::size_t>(r + half * m)];
            for (int c = 0; c < width; ++c) {
                cols[c] = list[static_cast<std::size_t>(c)];
                cols[width + c] = m + list[static_cast<std::size_t>(c)];
            }
        }

        double* psi_row = values.data() + offsets[static_cast<std::size_t>(r)];
        double* theta_row = values.data() + offsets[static_cast<std::size_t>(r + m)];
        const int node = mesh.interior_nodes()[static_cast<std::size_t>(r)];
        for (int t : mesh.incident_triangles(node)) {
            const Triangle& tri = mesh.triangle(t);
            const int a = detail::local_index(tri, node);
            const Blocks& blk = locals[static_cast<std::size_t>(t)];
            for (int b = 0; b < 3; ++b) {
                const int col = mesh.interior_index(tri[static_cast<std::size_t>(b)]);
                if (col < 0) {
                    continue;
                }
                const int pos = find_in(list.data(), list.data() + width, col);
                const auto e = static_cast<std::size_t>(3 * a + b);
                psi_row[pos] += blk.pp[e];
                psi_row[width + pos] += blk.pt[e];
                theta_row[pos] += blk.tp[e];
                theta_row[width + pos] += blk.tt[e];
            }
        }
    }
    return SparseMatrix(2 * m, 2 * m, std::move(offsets), std::move(columns), std::move(values));
}

}  // namespace natconv

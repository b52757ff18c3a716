#include "hmdchan/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hmdchan
{

namespace
{

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXcd;

bool finite(const cplx &z) noexcept
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

double dense_max_eigenvalue(const Eigen::Ref<const RowMat> &g)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dominant_eigenvalue_psd: dense eigensolver failed");
    return std::max(0.0, solver.eigenvalues().maxCoeff());
}

} // namespace

ConstMatrixView::ConstMatrixView(std::span<const cplx> values, std::size_t r, std::size_t c)
    : data(values.data()), rows(r), cols(c)
{
    if (values.size() != r * c)
        throw std::invalid_argument("ConstMatrixView: " + std::to_string(values.size()) + " values for a " +
                                    std::to_string(r) + "x" + std::to_string(c) + " matrix");
}

namespace
{

// Power iteration on an implicit PSD operator. Returns false when the caller
// should switch to a dense solve: no convergence within max_iterations, a
// collapsed iterate, or a convergence rate projecting beyond budget
// iterations (checked from iteration probe_after on).
template <class Apply>
bool power_iterate(Apply &&apply, std::size_t n, const PowerIterationSettings &settings, int probe_after,
                   double budget, DominantEigenResult &res)
{
    Vec v = Vec::Constant(static_cast<Eigen::Index>(n), cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    Vec w(static_cast<Eigen::Index>(n));
    apply(v, w);
    double lambda = v.dot(w).real();
    double diff_prev = -1.0;
    const double tol = settings.rel_tolerance;

    for (int it = 1; it <= settings.max_iterations; ++it)
    {
        const double norm = w.norm();
        if (!(norm > 0.0))
            return false;
        v = w / norm;
        apply(v, w);
        const double next = v.dot(w).real();
        const double diff = std::abs(next - lambda);
        lambda = next;
        res.iterations = it;
        res.value = lambda;

        if (diff <= tol * std::abs(lambda))
        {
            // Rayleigh quotients approach lambda_1 geometrically with ratio
            // rho^2; the remaining error is about diff * rho^2 / (1 - rho^2).
            if (diff == 0.0 || diff <= 1e-3 * tol * std::abs(lambda))
                return true;
            if (diff_prev > 0.0)
            {
                const double rho2 = diff / diff_prev;
                if (rho2 < 1.0 && diff * rho2 / (1.0 - rho2) <= tol * std::abs(lambda))
                    return true;
            }
        }
        // Slow geometric convergence: a dense solve is cheaper than the
        // projected remaining iterations.
        if (it >= probe_after && diff_prev > 0.0 && diff > 0.0)
        {
            const double rho2 = diff / diff_prev;
            if (rho2 < 1.0 && static_cast<double>(it) + std::log(tol * std::abs(lambda) / diff) / std::log(rho2) > budget)
                return false;
        }
        diff_prev = diff;
    }
    return false;
}

DominantEigenResult finish(bool converged, DominantEigenResult res, double max_diag,
                           const std::function<double()> &dense)
{
    if (!converged || res.value < max_diag * (1.0 - 1e-9))
    {
        res.value = dense();
        res.used_fallback = true;
        return res;
    }
    res.value = std::max(0.0, res.value);
    return res;
}

} // namespace

DominantEigenResult dominant_eigenvalue_psd(std::span<const cplx> gram, std::size_t n,
                                            const PowerIterationSettings &settings)
{
    if (n == 0 || gram.size() != n * n)
        throw std::invalid_argument("dominant_eigenvalue_psd: expected a non-empty square matrix");
    Eigen::Map<const RowMat> g(gram.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_diag = std::max(max_diag, g(i, i).real());
    if (max_diag <= 0.0)
        return {0.0, 0, false}; // PSD with zero diagonal is the zero matrix

    DominantEigenResult res;
    const bool ok = power_iterate([&](const Vec &v, Vec &w) { w.noalias() = g * v; }, n, settings, 16,
                                  static_cast<double>(std::max<std::size_t>(64, n)), res);
    return finish(ok, res, max_diag, [&] { return dense_max_eigenvalue(g); });
}

void accumulate_column_gram(ConstMatrixView h, std::span<cplx> gram)
{
    if (gram.size() != h.cols * h.cols)
        throw std::invalid_argument("accumulate_column_gram: gram size mismatch");
    Eigen::Map<const RowMat> hm(h.data, static_cast<Eigen::Index>(h.rows), static_cast<Eigen::Index>(h.cols));
    Eigen::Map<RowMat> g(gram.data(), static_cast<Eigen::Index>(h.cols), static_cast<Eigen::Index>(h.cols));
    RowMat acc = RowMat::Zero(g.rows(), g.cols());
    acc.selfadjointView<Eigen::Lower>().rankUpdate(hm.adjoint());
    g.triangularView<Eigen::Lower>() += acc;
    g.triangularView<Eigen::StrictlyUpper>() += acc.adjoint();
}

std::vector<cplx> smaller_gram(ConstMatrixView h, std::size_t &n)
{
    Eigen::Map<const RowMat> hm(h.data, static_cast<Eigen::Index>(h.rows), static_cast<Eigen::Index>(h.cols));
    n = std::min(h.rows, h.cols);
    std::vector<cplx> out(n * n);
    Eigen::Map<RowMat> g(out.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    g.setZero();
    if (h.rows >= h.cols)
        g.selfadjointView<Eigen::Lower>().rankUpdate(hm.adjoint());
    else
        g.selfadjointView<Eigen::Lower>().rankUpdate(hm);
    g.triangularView<Eigen::StrictlyUpper>() = g.adjoint();
    return out;
}

DominantEigenResult dominant_sq_singular_value_detailed(ConstMatrixView h, const PowerIterationSettings &settings)
{
    if (h.data == nullptr || h.rows == 0 || h.cols == 0)
        throw std::invalid_argument("dominant_sq_singular_value: empty matrix");
    for (std::size_t i = 0; i < h.rows * h.cols; ++i)
        if (!finite(h.data[i]))
            throw std::invalid_argument("dominant_sq_singular_value: non-finite entry at index " + std::to_string(i));
    Eigen::Map<const RowMat> hm(h.data, static_cast<Eigen::Index>(h.rows), static_cast<Eigen::Index>(h.cols));
    const bool tall = h.rows >= h.cols;
    const std::size_t n = std::min(h.rows, h.cols);

    // Diagonal of the smaller Gram: squared column (tall) or row norms.
    const double max_diag = tall ? hm.colwise().squaredNorm().maxCoeff() : hm.rowwise().squaredNorm().maxCoeff();
    if (max_diag <= 0.0)
        return {0.0, 0, false};

    // Iterate without forming the Gram matrix; it is built only for the
    // dense fallback.
    Vec tmp(static_cast<Eigen::Index>(tall ? h.rows : h.cols));
    auto apply = [&](const Vec &v, Vec &w) {
        if (tall)
        {
            tmp.noalias() = hm * v;
            w.noalias() = hm.adjoint() * tmp;
        }
        else
        {
            tmp.noalias() = hm.adjoint() * v;
            w.noalias() = hm * tmp;
        }
    };
    DominantEigenResult res;
    const bool ok =
        power_iterate(apply, n, settings, 8, static_cast<double>(std::max<std::size_t>(32, n / 4)), res);
    return finish(ok, res, max_diag, [&] {
        std::size_t side = 0;
        const auto g = smaller_gram(h, side);
        return dense_max_eigenvalue(
            Eigen::Map<const RowMat>(g.data(), static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side)));
    });
}

double dominant_sq_singular_value(ConstMatrixView h, const PowerIterationSettings &settings)
{
    return dominant_sq_singular_value_detailed(h, settings).value;
}

} // namespace hmdchan

#pragma once

#include "hmdchan/tensor.hpp"

#include <cstddef>
#include <span>

namespace hmdchan
{

// Read-only view of a row-major complex matrix.
struct ConstMatrixView
{
    const cplx *data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    ConstMatrixView() = default;
    ConstMatrixView(std::span<const cplx> values, std::size_t r, std::size_t c);

    const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
};

struct PowerIterationSettings
{
    double rel_tolerance = 1e-12;
    int max_iterations = 1000;
};

struct DominantEigenResult
{
    double value = 0.0;
    int iterations = 0;
    bool used_fallback = false;
};

// Largest eigenvalue of a Hermitian positive semi-definite n x n matrix
// (row-major, both triangles populated).
//
// Power iteration from the all-ones vector. Iteration stops once successive
// Rayleigh quotients agree to rel_tolerance and the geometric tail estimate
// of the remaining error is within the same bound. Non-convergence, a
// collapsed iterate, a result below the largest diagonal entry (which
// bounds lambda_1 from below), or a convergence rate that projects more than
// max(64, n) iterations hands over to a dense Hermitian eigensolver.
DominantEigenResult dominant_eigenvalue_psd(std::span<const cplx> gram, std::size_t n,
                                            const PowerIterationSettings &settings = {});

// lambda_1 of H H^H, i.e. the squared largest singular value of H. Power
// iteration on the smaller of the two Gram matrices, applied as H^H (H v)
// without forming it; the Gram matrix is built only for the dense fallback.
double dominant_sq_singular_value(ConstMatrixView h, const PowerIterationSettings &settings = {});
DominantEigenResult dominant_sq_singular_value_detailed(ConstMatrixView h,
                                                        const PowerIterationSettings &settings = {});

// Gram matrix of the smaller side: H^H H when rows >= cols, otherwise H H^H.
// Returns the side length through n.
std::vector<cplx> smaller_gram(ConstMatrixView h, std::size_t &n);

// Accumulates H^H H (cols x cols) into gram, which must have cols*cols entries.
void accumulate_column_gram(ConstMatrixView h, std::span<cplx> gram);

} // namespace hmdchan

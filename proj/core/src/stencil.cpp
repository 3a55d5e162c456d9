#include "vfpair/stencil.hpp"

#include "vfpair/errors.hpp"

namespace vfp {

namespace {

// Classical symmetric 8th-order weights, offsets -4..+4, before division by h^order.
constexpr std::array<double, 9> kFirstRaw = {
    1.0 / 280.0, -4.0 / 105.0, 1.0 / 5.0, -4.0 / 5.0, 0.0,
    4.0 / 5.0,   -1.0 / 5.0,   4.0 / 105.0, -1.0 / 280.0,
};

constexpr std::array<double, 9> kSecondRaw = {
    -1.0 / 560.0, 8.0 / 315.0, -1.0 / 5.0, 8.0 / 5.0, -205.0 / 72.0,
    8.0 / 5.0,    -1.0 / 5.0,  8.0 / 315.0, -1.0 / 560.0,
};

} // namespace

DiffOperator DiffOperator::first(double h) {
    DiffOperator op;
    op.order = 1;
    op.h = h;
    for (int k = 0; k < 9; ++k) op.weights[k] = kFirstRaw[k] / h;
    return op;
}

DiffOperator DiffOperator::second(double h) {
    DiffOperator op;
    op.order = 2;
    op.h = h;
    const double h2 = h * h;
    for (int k = 0; k < 9; ++k) op.weights[k] = kSecondRaw[k] / h2;
    return op;
}

namespace {

template <class T>
void apply_periodic(const std::array<double, 9>& w, const T* in, T* out, std::size_t n) {
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    // Wrapped edges, then a straight interior loop.
    for (std::ptrdiff_t j = 0; j < std::min<std::ptrdiff_t>(4, sn); ++j) {
        T acc = in[(j - 4 + sn) % sn] * w[0];
        for (int k = 1; k < 9; ++k) acc += in[(j + k - 4 + sn) % sn] * w[k];
        out[j] = acc;
    }
    for (std::ptrdiff_t j = 4; j < sn - 4; ++j) {
        T acc = in[j - 4] * w[0];
        acc += in[j - 3] * w[1];
        acc += in[j - 2] * w[2];
        acc += in[j - 1] * w[3];
        acc += in[j] * w[4];
        acc += in[j + 1] * w[5];
        acc += in[j + 2] * w[6];
        acc += in[j + 3] * w[7];
        acc += in[j + 4] * w[8];
        out[j] = acc;
    }
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(4, sn - 4); j < sn; ++j) {
        T acc = in[(j - 4 + sn) % sn] * w[0];
        for (int k = 1; k < 9; ++k) acc += in[(j + k - 4) % sn] * w[k];
        out[j] = acc;
    }
}

void check_size(std::size_t n) {
    if (n < 9)
        throw Error(ErrorCode::grid_too_small,
                    "periodic 9-point stencil needs at least 9 samples, got " + std::to_string(n));
}

} // namespace

void DiffOperator::apply(const Vec3* in, Vec3* out, std::size_t n) const {
    check_size(n);
    apply_periodic(weights, in, out, n);
}

void DiffOperator::apply(const double* in, double* out, std::size_t n) const {
    check_size(n);
    apply_periodic(weights, in, out, n);
}

std::vector<Vec3> differentiate(const std::vector<Vec3>& values, int order, double h) {
    if (order != 1 && order != 2)
        throw Error(ErrorCode::invalid_params, "derivative order must be 1 or 2");
    const DiffOperator op = order == 1 ? DiffOperator::first(h) : DiffOperator::second(h);
    std::vector<Vec3> out(values.size());
    op.apply(values.data(), out.data(), values.size());
    return out;
}

std::vector<double> differentiate(const std::vector<double>& values, int order, double h) {
    if (order != 1 && order != 2)
        throw Error(ErrorCode::invalid_params, "derivative order must be 1 or 2");
    const DiffOperator op = order == 1 ? DiffOperator::first(h) : DiffOperator::second(h);
    std::vector<double> out(values.size());
    op.apply(values.data(), out.data(), values.size());
    return out;
}

} // namespace vfp

// SPDX-License-Identifier: Apache-2.0

#include "awsp/scattering.hpp"
#include "filter_coeffs.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace awsp {

namespace {

// Half-sample symmetric extension index.
Eigen::Index reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
    const std::ptrdiff_t period = 2 * n;
    std::ptrdiff_t p = i % period;
    if (p < 0) p += period;
    return static_cast<Eigen::Index>(p < n ? p : period - 1 - p);
}

std::vector<double> take(std::span<const double> h, std::size_t start) {
    std::vector<double> out;
    for (std::size_t i = start; i < h.size(); i += 2) out.push_back(h[i]);
    return out;
}

bool positive_overlap(std::span<const double> ha, std::span<const double> hb) {
    return std::inner_product(ha.begin(), ha.end(), hb.begin(), 0.0) > 0.0;
}

RealMatrix transposed(const RealMatrix& a) { return a.transpose(); }

constexpr double kHalfRoot = 0.70710678118654752440;

// Quad of real samples to the two complex orientations (p - q, p + q).
std::pair<ComplexMatrix, ComplexMatrix> q2c(const RealMatrix& y) {
    const Eigen::Index r = y.rows() / 2, c = y.cols() / 2;
    std::pair<ComplexMatrix, ComplexMatrix> z{ComplexMatrix(r, c), ComplexMatrix(r, c)};
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) {
            const cplx p{y(2 * i, 2 * j) * kHalfRoot, y(2 * i, 2 * j + 1) * kHalfRoot};
            const cplx q{y(2 * i + 1, 2 * j + 1) * kHalfRoot, -y(2 * i + 1, 2 * j) * kHalfRoot};
            z.first(i, j) = p - q;
            z.second(i, j) = p + q;
        }
    return z;
}

RealMatrix c2q(const ComplexMatrix& w1, const ComplexMatrix& w2) {
    const Eigen::Index r = w1.rows(), c = w1.cols();
    RealMatrix x(2 * r, 2 * c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) {
            const cplx p = (w1(i, j) + w2(i, j)) * kHalfRoot;
            const cplx q = (w1(i, j) - w2(i, j)) * kHalfRoot;
            x(2 * i, 2 * j) = p.real();
            x(2 * i, 2 * j + 1) = p.imag();
            x(2 * i + 1, 2 * j) = q.imag();
            x(2 * i + 1, 2 * j + 1) = -q.real();
        }
    return x;
}

void require_multiple(const RealMatrix& x, std::size_t levels) {
    const auto unit = static_cast<Eigen::Index>(std::size_t{1} << levels);
    if (x.rows() < unit || x.cols() < unit || x.rows() % unit != 0 || x.cols() % unit != 0)
        throw DimensionError("dtcwt: dimensions " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             " must be positive multiples of " + std::to_string(unit));
}

} // namespace

FilterBank build_filterbank(std::size_t first_len, std::size_t qshift_len) {
    if (qshift_len % 2 != 0) throw ConfigError("build_filterbank: quarter-shift length must be even");
    const auto* first = detail::find_first_level(first_len);
    const auto* qs = detail::find_qshift(qshift_len);
    if (!first || !qs)
        throw ConfigError("build_filterbank: no filter set for lengths " + std::to_string(first_len) + "/" +
                          std::to_string(qshift_len));
    auto vec = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
    FilterBank b;
    b.first_name = first->name;
    b.qshift_name = qs->name;
    b.h0o = vec(first->h0);
    b.h1o = vec(first->h1);
    b.g0o = vec(first->g0);
    b.g1o = vec(first->g1);
    b.h0a = vec(qs->h0a);
    b.h0b = vec(qs->h0b);
    b.h1a = vec(qs->h1a);
    b.h1b = vec(qs->h1b);
    b.g0a = vec(qs->g0a);
    b.g0b = vec(qs->g0b);
    b.g1a = vec(qs->g1a);
    b.g1b = vec(qs->g1b);
    return b;
}

RealMatrix colfilter(const RealMatrix& x, std::span<const double> h) {
    if (h.size() % 2 == 0) throw DimensionError("colfilter: filter length must be odd");
    const auto r = static_cast<std::ptrdiff_t>(x.rows());
    const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
    RealMatrix y = RealMatrix::Zero(x.rows(), x.cols());
    for (std::ptrdiff_t n = 0; n < r; ++n)
        for (std::size_t k = 0; k < h.size(); ++k)
            y.row(n).noalias() += h[k] * x.row(reflect(n + half - static_cast<std::ptrdiff_t>(k), r));
    return y;
}

RealMatrix coldfilt(const RealMatrix& x, std::span<const double> ha, std::span<const double> hb) {
    const auto r = static_cast<std::ptrdiff_t>(x.rows());
    if (r % 4 != 0) throw DimensionError("coldfilt: rows must be a multiple of 4");
    if (ha.size() != hb.size() || ha.size() % 2 != 0) throw DimensionError("coldfilt: filters must share an even length");
    const auto m = static_cast<std::ptrdiff_t>(ha.size());
    const std::ptrdiff_t mh = m / 2;
    const auto hao = take(ha, 0), hae = take(ha, 1), hbo = take(hb, 0), hbe = take(hb, 1);
    const Eigen::Index s1 = positive_overlap(ha, hb) ? 0 : 1;
    const Eigen::Index s2 = 1 - s1;
    auto xe = [&](std::ptrdiff_t i) { return reflect(i - m, r); };
    RealMatrix y = RealMatrix::Zero(r / 2, x.cols());
    for (std::ptrdiff_t k = 0; k < r / 4; ++k) {
        auto ya = y.row(2 * k + s1);
        auto yb = y.row(2 * k + s2);
        for (std::ptrdiff_t i = 0; i < mh; ++i) {
            const std::ptrdiff_t t = 5 + 4 * (k + mh - 1 - i);
            const auto ui = static_cast<std::size_t>(i);
            ya.noalias() += hao[ui] * x.row(xe(t - 1)) + hae[ui] * x.row(xe(t - 3));
            yb.noalias() += hbo[ui] * x.row(xe(t)) + hbe[ui] * x.row(xe(t - 2));
        }
    }
    return y;
}

RealMatrix colifilt(const RealMatrix& x, std::span<const double> ha, std::span<const double> hb) {
    const auto r = static_cast<std::ptrdiff_t>(x.rows());
    if (r % 2 != 0) throw DimensionError("colifilt: rows must be even");
    if (ha.size() != hb.size() || ha.size() % 2 != 0) throw DimensionError("colifilt: filters must share an even length");
    const auto m2 = static_cast<std::ptrdiff_t>(ha.size() / 2);
    const auto hao = take(ha, 0), hae = take(ha, 1), hbo = take(hb, 0), hbe = take(hb, 1);
    const bool pos = positive_overlap(ha, hb);
    auto xe = [&](std::ptrdiff_t i) { return reflect(i - m2, r); };
    RealMatrix y = RealMatrix::Zero(2 * r, x.cols());
    const bool even_half = m2 % 2 == 0;
    for (std::ptrdiff_t k = 0; k < r / 2; ++k) {
        for (std::ptrdiff_t i = 0; i < m2; ++i) {
            const std::ptrdiff_t u = k + m2 - 1 - i;
            const std::ptrdiff_t t = even_half ? 3 + 2 * u : 2 + 2 * u;
            const std::ptrdiff_t ta = pos ? t : t - 1;
            const std::ptrdiff_t tb = pos ? t - 1 : t;
            const auto ui = static_cast<std::size_t>(i);
            if (even_half) {
                y.row(4 * k).noalias() += hae[ui] * x.row(xe(tb - 2));
                y.row(4 * k + 1).noalias() += hbe[ui] * x.row(xe(ta - 2));
                y.row(4 * k + 2).noalias() += hao[ui] * x.row(xe(tb));
                y.row(4 * k + 3).noalias() += hbo[ui] * x.row(xe(ta));
            } else {
                y.row(4 * k).noalias() += hao[ui] * x.row(xe(tb));
                y.row(4 * k + 1).noalias() += hbo[ui] * x.row(xe(ta));
                y.row(4 * k + 2).noalias() += hae[ui] * x.row(xe(tb));
                y.row(4 * k + 3).noalias() += hbe[ui] * x.row(xe(ta));
            }
        }
    }
    return y;
}

Dtcwt2d dtcwt_forward(const RealMatrix& x, const FilterBank& bank, std::size_t levels) {
    if (levels < 1) throw ParameterError("dtcwt_forward: at least one level");
    require_multiple(x, levels);
    Dtcwt2d out;
    out.levels.resize(levels);

    auto store = [](std::array<ComplexMatrix, kOrientations>& dst, std::size_t a, std::size_t b,
                    const RealMatrix& y) {
        auto z = q2c(y);
        dst[a] = std::move(z.first);
        dst[b] = std::move(z.second);
    };

    // Level 1: undecimated odd filters.
    RealMatrix lo = transposed(colfilter(x, bank.h0o));
    RealMatrix hi = transposed(colfilter(x, bank.h1o));
    RealMatrix lolo = transposed(colfilter(lo, bank.h0o));
    store(out.levels[0], 0, 5, transposed(colfilter(hi, bank.h0o)));
    store(out.levels[0], 2, 3, transposed(colfilter(lo, bank.h1o)));
    store(out.levels[0], 1, 4, transposed(colfilter(hi, bank.h1o)));

    for (std::size_t l = 1; l < levels; ++l) {
        lo = transposed(coldfilt(lolo, bank.h0b, bank.h0a));
        hi = transposed(coldfilt(lolo, bank.h1b, bank.h1a));
        lolo = transposed(coldfilt(lo, bank.h0b, bank.h0a));
        store(out.levels[l], 0, 5, transposed(coldfilt(hi, bank.h0b, bank.h0a)));
        store(out.levels[l], 2, 3, transposed(coldfilt(lo, bank.h1b, bank.h1a)));
        store(out.levels[l], 1, 4, transposed(coldfilt(hi, bank.h1b, bank.h1a)));
    }
    out.lowpass = std::move(lolo);
    return out;
}

RealMatrix dtcwt_inverse(const Dtcwt2d& t, const FilterBank& bank) {
    if (t.levels.empty()) throw DimensionError("dtcwt_inverse: no levels");
    const std::size_t levels = t.levels.size();
    const auto& first = t.levels[0][0];
    for (std::size_t l = 0; l < levels; ++l)
        for (const auto& s : t.levels[l])
            if (s.rows() != (first.rows() >> l) || s.cols() != (first.cols() >> l) || s.rows() == 0)
                throw DimensionError("dtcwt_inverse: subband shape mismatch at level " + std::to_string(l + 1));
    const auto& last = t.levels[levels - 1][0];
    if (t.lowpass.rows() != 2 * last.rows() || t.lowpass.cols() != 2 * last.cols())
        throw DimensionError("dtcwt_inverse: lowpass shape mismatch");

    RealMatrix z = t.lowpass;
    for (std::size_t l = levels; l-- > 1;) {
        const auto& s = t.levels[l];
        const RealMatrix lh = c2q(s[0], s[5]);
        const RealMatrix hl = c2q(s[2], s[3]);
        const RealMatrix hh = c2q(s[1], s[4]);
        const RealMatrix y1 = colifilt(z, bank.g0b, bank.g0a) + colifilt(lh, bank.g1b, bank.g1a);
        const RealMatrix y2 = colifilt(hl, bank.g0b, bank.g0a) + colifilt(hh, bank.g1b, bank.g1a);
        z = transposed(colifilt(transposed(y1), bank.g0b, bank.g0a) + colifilt(transposed(y2), bank.g1b, bank.g1a));
    }
    const auto& s = t.levels[0];
    const RealMatrix lh = c2q(s[0], s[5]);
    const RealMatrix hl = c2q(s[2], s[3]);
    const RealMatrix hh = c2q(s[1], s[4]);
    const RealMatrix y1 = colfilter(z, bank.g0o) + colfilter(lh, bank.g1o);
    const RealMatrix y2 = colfilter(hl, bank.g0o) + colfilter(hh, bank.g1o);
    return transposed(colfilter(transposed(y1), bank.g0o) + colfilter(transposed(y2), bank.g1o));
}

Dtcwt1d dtcwt1d_forward(const Eigen::VectorXd& x, const FilterBank& bank, std::size_t levels) {
    if (levels < 1) throw ParameterError("dtcwt1d_forward: at least one level");
    const auto unit = static_cast<Eigen::Index>(std::size_t{1} << levels);
    if (x.size() < unit || x.size() % unit != 0)
        throw DimensionError("dtcwt1d_forward: length must be a positive multiple of 2^levels");
    auto as_complex = [](const RealMatrix& hi) {
        ComplexVector z(hi.rows() / 2);
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = {hi(2 * i, 0), hi(2 * i + 1, 0)};
        return z;
    };
    Dtcwt1d out;
    RealMatrix col = x;
    RealMatrix lo = colfilter(col, bank.h0o);
    out.levels.push_back(as_complex(colfilter(col, bank.h1o)));
    for (std::size_t l = 1; l < levels; ++l) {
        const RealMatrix hi = coldfilt(lo, bank.h1b, bank.h1a);
        lo = coldfilt(lo, bank.h0b, bank.h0a);
        out.levels.push_back(as_complex(hi));
    }
    out.lowpass = lo.col(0);
    return out;
}

Eigen::VectorXd dtcwt1d_inverse(const Dtcwt1d& t, const FilterBank& bank) {
    if (t.levels.empty()) throw DimensionError("dtcwt1d_inverse: no levels");
    auto as_real = [](const ComplexVector& z) {
        RealMatrix hi(2 * z.size(), 1);
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            hi(2 * i, 0) = z[i].real();
            hi(2 * i + 1, 0) = z[i].imag();
        }
        return hi;
    };
    RealMatrix lo = t.lowpass;
    for (std::size_t l = t.levels.size(); l-- > 1;) {
        if (t.levels[l].size() * 2 != lo.rows()) throw DimensionError("dtcwt1d_inverse: shape mismatch");
        lo = colifilt(lo, bank.g0b, bank.g0a) + colifilt(as_real(t.levels[l]), bank.g1b, bank.g1a);
    }
    if (t.levels[0].size() * 2 != lo.rows()) throw DimensionError("dtcwt1d_inverse: shape mismatch");
    const RealMatrix y = colfilter(lo, bank.g0o) + colfilter(as_real(t.levels[0]), bank.g1o);
    return y.col(0);
}

} // namespace awsp

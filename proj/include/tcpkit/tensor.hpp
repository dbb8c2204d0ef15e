#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcpkit {

class TensorError : public std::runtime_error {
public:
    explicit TensorError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string index_to_string(std::span<const int> idx_zero_based) {
    std::string s = "(";
    for (std::size_t k = 0; k < idx_zero_based.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(idx_zero_based[k] + 1);  // 1-based in messages
    }
    return s + ")";
}

// Contract one axis of a cube-shaped buffer (rank axes, extent n each)
// against x. Layout is row-major; axis is 0-based. The inner summation
// order is fixed, so results are deterministic.
inline std::vector<double> contract_axis(const std::vector<double>& buf,
                                         int rank, int n, int axis,
                                         std::span<const double> x) {
    std::size_t inner = 1;
    for (int a = axis + 1; a < rank; ++a) inner *= static_cast<std::size_t>(n);
    const std::size_t outer = buf.size() / (inner * static_cast<std::size_t>(n));
    std::vector<double> out(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t obase = o * static_cast<std::size_t>(n) * inner;
        for (int k = 0; k < n; ++k) {
            const double xk = x[static_cast<std::size_t>(k)];
            const double* src = buf.data() + obase + static_cast<std::size_t>(k) * inner;
            double* dst = out.data() + o * inner;
            for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i] * xk;
        }
    }
    return out;
}

}  // namespace detail

/// Dense order-m, dimension-n real tensor. Entries are stored row-major
/// over the multi-index (i1,...,im), each index in 0..n-1 internally;
/// reports and file formats are 1-based. Immutable after construction.
class Tensor {
public:
    Tensor(int order, int dim, std::vector<double> entries)
        : order_(order), dim_(dim), entries_(std::move(entries)) {
        if (order_ < 2) throw TensorError("tensor order must be >= 2");
        if (dim_ < 1) throw TensorError("tensor dimension must be >= 1");
        const std::size_t want = size_for(order_, dim_);
        if (entries_.size() != want)
            throw TensorError("entry count " + std::to_string(entries_.size()) +
                              " does not match dim^order = " + std::to_string(want));
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (!std::isfinite(entries_[i]))
                throw TensorError("non-finite entry at flat index " + std::to_string(i));
    }

    // dim^order, with a desk-scale cap of 1e8 entries.
    static std::size_t size_for(int order, int dim) {
        std::size_t s = 1;
        for (int k = 0; k < order; ++k) {
            s *= static_cast<std::size_t>(dim);
            if (s > 100'000'000ull)
                throw TensorError("dim^order exceeds the 1e8 dense-storage cap");
        }
        return s;
    }

    static Tensor zeros(int order, int dim) {
        return Tensor(order, dim, std::vector<double>(size_for(order, dim), 0.0));
    }

    /// Identity tensor: diagonal entries one, off-diagonal zero.
    static Tensor identity(int order, int dim) {
        return diagonal(order, dim, std::vector<double>(static_cast<std::size_t>(dim), 1.0));
    }

    static Tensor diagonal(int order, int dim, std::span<const double> diag) {
        if (static_cast<int>(diag.size()) != dim)
            throw TensorError("diagonal length does not match dimension");
        std::vector<double> e(size_for(order, dim), 0.0);
        Tensor t(order, dim, std::move(e));
        for (int i = 0; i < dim; ++i)
            t.entries_[t.diag_flat(i)] = diag[static_cast<std::size_t>(i)];
        return t;
    }

    int order() const { return order_; }
    int dim() const { return dim_; }
    const std::vector<double>& entries() const { return entries_; }

    std::size_t flat_index(std::span<const int> idx) const {
        std::size_t f = 0;
        for (int k = 0; k < order_; ++k) {
            const int i = idx[static_cast<std::size_t>(k)];
            if (i < 0 || i >= dim_)
                throw TensorError("index " + std::to_string(i + 1) + " out of range 1.." +
                                  std::to_string(dim_));
        }
        for (int k = 0; k < order_; ++k)
            f = f * static_cast<std::size_t>(dim_) +
                static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
        return f;
    }

    double operator()(std::span<const int> idx) const { return entries_[flat_index(idx)]; }
    double operator()(std::initializer_list<int> idx) const {
        return (*this)(std::span<const int>(idx.begin(), idx.size()));
    }

    /// Decode a flat position into its multi-index (0-based).
    std::vector<int> multi_index(std::size_t flat) const {
        std::vector<int> idx(static_cast<std::size_t>(order_));
        for (int k = order_ - 1; k >= 0; --k) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
            flat /= static_cast<std::size_t>(dim_);
        }
        return idx;
    }

    double diag_entry(int i) const { return entries_[diag_flat(i)]; }

    bool same_shape(const Tensor& other) const {
        return order_ == other.order_ && dim_ == other.dim_;
    }

private:
    std::size_t diag_flat(int i) const {
        std::size_t f = 0;
        for (int k = 0; k < order_; ++k)
            f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return f;
    }

    int order_;
    int dim_;
    std::vector<double> entries_;
};

/// The pair (r, B) with A = r*I - B and B entrywise nonnegative.
struct ZDecomposition {
    double r;
    Tensor b;
};

/// Diagonal tensor: entries d_i at (i,...,i), zero elsewhere.
struct DiagonalTensor {
    int order;
    int dim;
    std::vector<double> diag;

    Tensor to_tensor() const { return Tensor::diagonal(order, dim, diag); }
};

/// F(x) = A x^{m-1}: F_i = sum over trailing indices of
/// a_{i i2...im} x_{i2} ... x_{im}. Dense summation, sequential axis
/// reduction from the last axis inward.
inline std::vector<double> contract(const Tensor& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.dim())
        throw TensorError("contract: vector length " + std::to_string(x.size()) +
                          " does not match tensor dimension " + std::to_string(a.dim()));
    std::vector<double> buf = a.entries();
    for (int rank = a.order(); rank > 1; --rank)
        buf = detail::contract_axis(buf, rank, a.dim(), rank - 1, x);
    return buf;
}

inline std::vector<double> contract(const Tensor& a, const std::vector<double>& x) {
    return contract(a, std::span<const double>(x));
}

/// A x^m = <A x^{m-1}, x>.
inline double quad_form(const Tensor& a, std::span<const double> x) {
    const std::vector<double> fx = contract(a, x);
    double s = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) s += fx[i] * x[i];
    return s;
}

inline double quad_form(const Tensor& a, const std::vector<double>& x) {
    return quad_form(a, std::span<const double>(x));
}

/// Componentwise power x^{[p]}. Sign-preserving for integer p; fractional
/// p requires nonnegative components.
inline std::vector<double> power_vec(std::span<const double> x, double p) {
    const bool integer_p = (p == std::round(p));
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!integer_p && x[i] < 0.0)
            throw TensorError("power_vec: negative base with fractional exponent");
        out[i] = std::pow(x[i], p);
    }
    return out;
}

inline std::vector<double> power_vec(const std::vector<double>& x, double p) {
    return power_vec(std::span<const double>(x), p);
}

/// Principal subtensor: keep entries whose m indices all lie in the
/// (0-based, sorted) index set, relabeled to 0..|I|-1.
inline Tensor principal_subtensor(const Tensor& a, std::span<const int> index_set) {
    if (index_set.empty()) throw TensorError("principal_subtensor: empty index set");
    for (std::size_t k = 0; k < index_set.size(); ++k) {
        if (index_set[k] < 0 || index_set[k] >= a.dim())
            throw TensorError("principal_subtensor: index out of range");
        if (k > 0 && index_set[k] <= index_set[k - 1])
            throw TensorError("principal_subtensor: index set must be strictly increasing");
    }
    const int sub_n = static_cast<int>(index_set.size());
    const int m = a.order();
    std::vector<double> e(Tensor::size_for(m, sub_n));
    std::vector<int> sub_idx(static_cast<std::size_t>(m), 0);
    std::vector<int> parent_idx(static_cast<std::size_t>(m), 0);
    for (std::size_t f = 0; f < e.size(); ++f) {
        std::size_t rem = f;
        for (int k = m - 1; k >= 0; --k) {
            sub_idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % static_cast<std::size_t>(sub_n));
            rem /= static_cast<std::size_t>(sub_n);
        }
        for (int k = 0; k < m; ++k)
            parent_idx[static_cast<std::size_t>(k)] =
                index_set[static_cast<std::size_t>(sub_idx[static_cast<std::size_t>(k)])];
        e[f] = a(std::span<const int>(parent_idx));
    }
    return Tensor(m, sub_n, std::move(e));
}

inline Tensor principal_subtensor(const Tensor& a, const std::vector<int>& index_set) {
    return principal_subtensor(a, std::span<const int>(index_set));
}

/// Whether the multi-index is diagonal (all positions equal).
inline bool is_diagonal_index(std::span<const int> idx) {
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (idx[k] != idx[0]) return false;
    return true;
}

/// Split A = r*I - B with B >= 0. The canonical r is the largest diagonal
/// entry; any requested r' >= canonical is also accepted. Throws if A has
/// a positive off-diagonal entry (not a Z-tensor), reporting the offending
/// multi-index 1-based.
inline ZDecomposition z_decompose(const Tensor& a, double requested_r = std::nan("")) {
    const std::vector<double>& e = a.entries();
    double r = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.dim(); ++i) r = std::max(r, a.diag_entry(i));
    if (!std::isnan(requested_r)) {
        if (requested_r < r)
            throw TensorError("z_decompose: requested r is below the canonical maximum diagonal");
        r = requested_r;
    }
    std::vector<double> b(e.size());
    for (std::size_t f = 0; f < e.size(); ++f) {
        const std::vector<int> idx = a.multi_index(f);
        if (is_diagonal_index(idx)) {
            b[f] = r - e[f];
        } else {
            if (e[f] > 0.0)
                throw TensorError("z_decompose: positive off-diagonal entry at " +
                                  detail::index_to_string(idx));
            b[f] = -e[f];
        }
    }
    return ZDecomposition{r, Tensor(a.order(), a.dim(), std::move(b))};
}

/// Is every off-diagonal entry <= 0? Returns the first offending flat
/// index through `offender` when not.
inline bool z_pattern_holds(const Tensor& a, std::size_t* offender = nullptr) {
    const std::vector<double>& e = a.entries();
    for (std::size_t f = 0; f < e.size(); ++f) {
        if (e[f] <= 0.0) continue;
        if (!is_diagonal_index(a.multi_index(f))) {
            if (offender) *offender = f;
            return false;
        }
    }
    return true;
}

/// Jacobian of F(x) = A x^{m-1}: entry (i,j) = dF_i/dx_j, assembled by
/// contracting every trailing axis but one against x.
inline std::vector<double> jacobian(const Tensor& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.dim())
        throw TensorError("jacobian: vector length does not match tensor dimension");
    const int m = a.order();
    const int n = a.dim();
    std::vector<double> jac(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int keep = 1; keep < m; ++keep) {
        // Reduce trailing axes after `keep`, then the axes between 0 and
        // `keep`, leaving the n x n slice over (axis 0, axis keep).
        std::vector<double> buf = a.entries();
        int rank = m;
        while (rank > keep + 1) {
            buf = detail::contract_axis(buf, rank, n, rank - 1, x);
            --rank;
        }
        while (rank > 2) {
            buf = detail::contract_axis(buf, rank, n, 1, x);
            --rank;
        }
        for (std::size_t p = 0; p < jac.size(); ++p) jac[p] += buf[p];
    }
    return jac;
}

inline std::vector<double> jacobian(const Tensor& a, const std::vector<double>& x) {
    return jacobian(a, std::span<const double>(x));
}

// Small vector helpers shared across modules.

inline double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::fabs(c));
    return m;
}

inline double inf_norm(const std::vector<double>& v) { return inf_norm(std::span<const double>(v)); }

inline double two_norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline double two_norm(const std::vector<double>& v) { return two_norm(std::span<const double>(v)); }

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Tensor add_diagonal(const Tensor& a, std::span<const double> diag) {
    if (static_cast<int>(diag.size()) != a.dim())
        throw TensorError("add_diagonal: diagonal length mismatch");
    std::vector<double> e = a.entries();
    for (int i = 0; i < a.dim(); ++i) {
        const std::vector<int> idx(static_cast<std::size_t>(a.order()), i);
        e[a.flat_index(idx)] += diag[static_cast<std::size_t>(i)];
    }
    return Tensor(a.order(), a.dim(), std::move(e));
}

inline Tensor add_diagonal(const Tensor& a, double s) {
    const std::vector<double> diag(static_cast<std::size_t>(a.dim()), s);
    return add_diagonal(a, std::span<const double>(diag.data(), diag.size()));
}

}  // namespace tcpkit

#include "cvdistill/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cvdistill {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

std::vector<double> sqrt_factorials(int n) {
    std::vector<double> s(n + 1);
    s[0] = 1.0;
    for (int i = 1; i <= n; ++i) s[i] = s[i - 1] * std::sqrt(static_cast<double>(i));
    return s;
}

std::vector<std::vector<double>> binomials(int n) {
    std::vector<std::vector<double>> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0);
        for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

long product(std::span<const int> v) {
    long p = 1;
    for (int d : v) p *= d;
    return p;
}

// Offset tables for a subset of modes: table[s] = flat offset of the joint
// sub-index s (mode-major over `modes`) in the full index space.
std::vector<long> offset_table(const std::vector<int>& dims, const std::vector<long>& strides,
                               std::span<const int> modes) {
    long n = 1;
    for (int m : modes) n *= dims[m];
    std::vector<long> table(n, 0);
    long rep = 1;  // how many consecutive sub-indices share the digit of the current mode
    for (int mi = static_cast<int>(modes.size()) - 1; mi >= 0; --mi) {
        const int mode = modes[mi];
        const int d = dims[mode];
        const long stride = strides[mode];
        for (long s = 0; s < n; ++s) {
            const long digit = (s / rep) % d;
            table[s] += digit * stride;
        }
        rep *= d;
    }
    return table;
}

std::vector<long> strides_of(const std::vector<int>& dims) {
    std::vector<long> s(dims.size());
    long acc = 1;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        s[i] = acc;
        acc *= dims[i];
    }
    return s;
}

// Applies `op` to the row index space of `m`. See FockArray::applied for the
// mode-replacement semantics. Returns the transformed matrix and fills
// `new_dims`.
MatrixXcd apply_to_rows(const MatrixXcd& m, const std::vector<int>& dims,
                        std::span<const int> modes, std::span<const int> out_dims,
                        const MatrixXcd& op, std::vector<int>& new_dims) {
    const long d_in = product([&] {
        std::vector<int> v;
        for (int mo : modes) v.push_back(dims[mo]);
        return v;
    }());
    const long d_out = product(out_dims);
    if (op.cols() != d_in || op.rows() != d_out)
        throw DomainError("operator shape does not match the selected modes");

    // new mode layout: out modes at the positions of the first out_dims.size()
    // input modes, later input modes removed
    new_dims.clear();
    std::vector<int> out_positions(out_dims.size(), -1);
    std::vector<int> rest_modes;
    {
        size_t j = 0;
        for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
            if (j < modes.size() && i == modes[j]) {
                if (j < out_dims.size()) {
                    out_positions[j] = static_cast<int>(new_dims.size());
                    new_dims.push_back(out_dims[j]);
                }
                ++j;
            } else {
                rest_modes.push_back(i);
                new_dims.push_back(dims[i]);
            }
        }
    }

    const auto old_strides = strides_of(dims);
    const auto sel_off = offset_table(dims, old_strides, modes);
    const auto rest_off = offset_table(dims, old_strides, rest_modes);
    const long d_rest = static_cast<long>(rest_off.size());
    const long ncols = m.cols();

    MatrixXcd gathered(d_in, d_rest * ncols);
    for (long c = 0; c < ncols; ++c)
        for (long r = 0; r < d_rest; ++r) {
            const long base = rest_off[r];
            auto col = gathered.col(r + d_rest * c);
            for (long s = 0; s < d_in; ++s) col(s) = m(sel_off[s] + base, c);
        }

    MatrixXcd h = op * gathered;
    gathered.resize(0, 0);

    const auto new_strides = strides_of(new_dims);
    std::vector<long> new_sel_off(d_out, 0);
    {
        long rep = 1;
        for (int j = static_cast<int>(out_dims.size()) - 1; j >= 0; --j) {
            const int d = out_dims[j];
            const long stride = new_strides[out_positions[j]];
            for (long s = 0; s < d_out; ++s) new_sel_off[s] += ((s / rep) % d) * stride;
            rep *= d;
        }
    }
    // rest modes keep their relative order in the new layout
    std::vector<int> new_rest_positions;
    {
        size_t j = 0;
        std::vector<bool> is_out(new_dims.size(), false);
        for (int p : out_positions) is_out[p] = true;
        for (int i = 0; i < static_cast<int>(new_dims.size()); ++i)
            if (!is_out[i]) new_rest_positions.push_back(i);
        (void)j;
    }
    std::vector<long> new_rest_off(d_rest, 0);
    {
        long rep = 1;
        for (int j = static_cast<int>(rest_modes.size()) - 1; j >= 0; --j) {
            const int d = dims[rest_modes[j]];
            const long stride = new_strides[new_rest_positions[j]];
            for (long r = 0; r < d_rest; ++r) new_rest_off[r] += ((r / rep) % d) * stride;
            rep *= d;
        }
    }

    MatrixXcd out(d_out * d_rest, ncols);
    for (long c = 0; c < ncols; ++c)
        for (long r = 0; r < d_rest; ++r) {
            const long base = new_rest_off[r];
            auto col = h.col(r + d_rest * c);
            for (long s = 0; s < d_out; ++s) out(new_sel_off[s] + base, c) = col(s);
        }
    return out;
}

}  // namespace

std::vector<long> FockArray::strides() const { return strides_of(dims_); }

long FockArray::total_dim() const { return product(dims_); }

long FockArray::flat_index(std::span<const int> idx) const {
    if (idx.size() != dims_.size()) throw DomainError("index arity does not match mode count");
    const auto s = strides();
    long flat = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= dims_[i]) throw DomainError("Fock index out of range");
        flat += idx[i] * s[i];
    }
    return flat;
}

FockArray FockArray::vacuum(int n_modes, int dim) {
    VectorXcd v = VectorXcd::Zero(static_cast<long>(std::pow(dim, n_modes)));
    v(0) = 1.0;
    return pure(std::vector<int>(n_modes, dim), std::move(v));
}

FockArray FockArray::pure(std::vector<int> dims, VectorXcd amplitudes) {
    if (amplitudes.size() != product(dims)) throw DomainError("amplitude vector size mismatch");
    FockArray f;
    f.dims_ = std::move(dims);
    f.kind_ = Kind::PureState;
    f.data_ = std::move(amplitudes);
    return f;
}

FockArray FockArray::density(std::vector<int> dims, MatrixXcd matrix) {
    if (matrix.rows() != product(dims) || matrix.cols() != matrix.rows())
        throw DomainError("density matrix size mismatch");
    FockArray f;
    f.dims_ = std::move(dims);
    f.kind_ = Kind::DensityMatrix;
    f.data_ = std::move(matrix);
    return f;
}

FockArray FockArray::tensor(const FockArray& a, const FockArray& b) {
    if (a.kind_ != b.kind_) throw DomainError("tensor product requires matching kinds");
    FockArray f;
    f.dims_ = a.dims_;
    f.dims_.insert(f.dims_.end(), b.dims_.begin(), b.dims_.end());
    f.kind_ = a.kind_;
    const long ra = a.data_.rows(), rb = b.data_.rows();
    const long ca = a.data_.cols(), cb = b.data_.cols();
    MatrixXcd out(ra * rb, ca * cb);
    for (long i = 0; i < ra; ++i)
        for (long j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a.data_(i, j) * b.data_;
    f.data_ = std::move(out);
    return f;
}

complex<double> FockArray::amplitude(std::span<const int> ket) const {
    if (kind_ != Kind::PureState) throw DomainError("amplitude() requires a pure state");
    return data_(flat_index(ket), 0);
}

complex<double> FockArray::element(std::span<const int> ket, std::span<const int> bra) const {
    if (kind_ == Kind::PureState) {
        return data_(flat_index(ket), 0) * std::conj(data_(flat_index(bra), 0));
    }
    return data_(flat_index(ket), flat_index(bra));
}

complex<double> FockArray::trace() const {
    if (kind_ == Kind::PureState) return data_.col(0).squaredNorm();
    return data_.trace();
}

FockArray FockArray::to_density() const {
    if (kind_ != Kind::PureState) return *this;
    FockArray f;
    f.dims_ = dims_;
    f.kind_ = Kind::DensityMatrix;
    f.data_ = data_.col(0) * data_.col(0).adjoint();
    return f;
}

FockArray FockArray::normalized() const {
    FockArray f = *this;
    if (kind_ == Kind::PureState) {
        const double n = data_.col(0).norm();
        if (n < 1e-300) throw ZeroWeightError("cannot normalize a zero state", 0.0);
        f.data_ /= n;
    } else {
        const double t = data_.trace().real();
        if (t < 1e-300) throw ZeroWeightError("cannot normalize a zero-trace state", 0.0);
        f.data_ /= t;
    }
    return f;
}

double FockArray::hermiticity_error() const {
    if (kind_ == Kind::PureState) return 0.0;
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

double FockArray::min_eigenvalue() const {
    if (kind_ == Kind::PureState) return 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (data_ + data_.adjoint()),
                                                Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double FockArray::purity() const {
    if (kind_ == Kind::PureState) return 1.0;
    const double t = data_.trace().real();
    return (data_ * data_).trace().real() / (t * t);
}

double FockArray::top_level_population(int mode) const {
    if (mode < 0 || mode >= num_modes()) throw DomainError("mode index out of range");
    const auto s = strides();
    const int d = dims_[mode];
    const long stride = s[mode];
    double pop = 0.0;
    const long total = total_dim();
    for (long i = 0; i < total; ++i) {
        if ((i / stride) % d != d - 1) continue;
        if (kind_ == Kind::PureState)
            pop += std::norm(data_(i, 0));
        else
            pop += data_(i, i).real();
    }
    const double t = std::abs(trace());
    return t > 0 ? pop / t : 0.0;
}

double FockArray::max_leakage() const {
    double m = 0.0;
    for (int i = 0; i < num_modes(); ++i) m = std::max(m, top_level_population(i));
    return m;
}

FockArray FockArray::applied(const MatrixXcd& op, std::span<const int> modes,
                             std::span<const int> out_dims) const {
    for (size_t i = 0; i + 1 < modes.size(); ++i)
        if (modes[i] >= modes[i + 1]) throw DomainError("modes must be strictly ascending");
    if (!modes.empty() && (modes.front() < 0 || modes.back() >= num_modes()))
        throw DomainError("mode index out of range");

    std::vector<int> new_dims;
    FockArray f;
    if (kind_ == Kind::PureState) {
        f.data_ = apply_to_rows(data_, dims_, modes, out_dims, op, new_dims);
        f.kind_ = Kind::PureState;
    } else {
        MatrixXcd half = apply_to_rows(data_, dims_, modes, out_dims, op, new_dims);
        // bra side: rho -> rho op^dagger, via op* acting on the column index
        MatrixXcd halft = half.transpose();
        half.resize(0, 0);
        std::vector<int> dummy;
        MatrixXcd outt = apply_to_rows(halft, dims_, modes, out_dims, op.conjugate(), dummy);
        f.data_ = outt.transpose();
        f.kind_ = kind_;
    }
    f.dims_ = std::move(new_dims);
    return f;
}

FockArray FockArray::applied_left(const MatrixXcd& op, std::span<const int> modes) const {
    std::vector<int> out_dims;
    for (int m : modes) out_dims.push_back(dims_[m]);
    std::vector<int> new_dims;
    FockArray f;
    f.data_ = apply_to_rows(data_, dims_, modes, out_dims, op, new_dims);
    f.kind_ = kind_;
    f.dims_ = std::move(new_dims);
    return f;
}

MatrixXcd annihilation_op(int dim) {
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

MatrixXcd creation_op(int dim) { return annihilation_op(dim).adjoint(); }

MatrixXcd number_op(int dim) {
    MatrixXcd n = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) n(i, i) = i;
    return n;
}

MatrixXcd quadrature_x(int dim) {
    const MatrixXcd a = annihilation_op(dim);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

MatrixXcd quadrature_p(int dim) {
    const MatrixXcd a = annihilation_op(dim);
    return complex<double>(0, 1) * (a.adjoint() - a) / std::sqrt(2.0);
}

MatrixXcd balanced_beam_splitter_op(int dim) {
    // U|m,n> = 2^{-(m+n)/2}/sqrt(m! n!) sum_{i<=m, j<=n} binom(m,i) binom(n,j)
    //          (-1)^{n-j} sqrt((i+j)! (m+n-i-j)!) |i+j, m+n-i-j>
    // (components falling outside the cutoff are dropped)
    const auto sf = sqrt_factorials(2 * dim);
    const auto bin = binomials(dim);
    MatrixXcd u = MatrixXcd::Zero(dim * dim, dim * dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) {
            const double norm = std::pow(2.0, -0.5 * (m + n)) / (sf[m] * sf[n]);
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= n; ++j) {
                    const int a = i + j, c = m + n - i - j;
                    if (a >= dim || c >= dim) continue;
                    const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
                    u(a * dim + c, m * dim + n) +=
                        norm * bin[m][i] * bin[n][j] * sign * sf[a] * sf[c];
                }
        }
    return u;
}

FockArray tmsv(double lambda, int dim, double leakage_bound) {
    if (lambda < 0.0 || lambda >= 1.0) throw DomainError("tmsv requires 0 <= lambda < 1");
    if (dim < 2) throw DomainError("tmsv requires at least two Fock levels");
    const double leakage = std::pow(lambda, 2 * dim);
    if (leakage > leakage_bound) {
        std::ostringstream os;
        os << "cutoff " << dim << " too small for lambda = " << lambda
           << ": tail weight " << leakage << " exceeds bound " << leakage_bound;
        throw CutoffError(os.str());
    }
    VectorXcd v = VectorXcd::Zero(static_cast<long>(dim) * dim);
    const double norm = std::sqrt(1.0 - lambda * lambda);
    double amp = norm;
    for (int n = 0; n < dim; ++n) {
        v(static_cast<long>(n) * dim + n) = amp;
        amp *= lambda;
    }
    return FockArray::pure({dim, dim}, std::move(v));
}

FockArray truncated_tmsv(double lambda, int dim) {
    if (dim < 2) throw DomainError("truncated_tmsv requires at least two Fock levels");
    VectorXcd v = VectorXcd::Zero(static_cast<long>(dim) * dim);
    const double norm = 1.0 / std::sqrt(1.0 + lambda * lambda);
    v(0) = norm;
    v(dim + 1) = lambda * norm;
    return FockArray::pure({dim, dim}, std::move(v));
}

FockArray apply_loss(const FockArray& rho_in, double T, int mode) {
    if (T < 0.0 || T > 1.0) throw DomainError("loss channel requires T in [0, 1]");
    if (mode < 0 || mode >= rho_in.num_modes()) throw DomainError("mode index out of range");
    const FockArray rho = rho_in.to_density();
    const int d = rho.dims()[mode];
    const auto bin = binomials(d);

    // kappa[n][k] = sqrt(binom(n,k)) T^{(n-k)/2} (1-T)^{k/2}
    std::vector<std::vector<double>> kappa(d);
    for (int n = 0; n < d; ++n) {
        kappa[n].resize(n + 1);
        for (int k = 0; k <= n; ++k)
            kappa[n][k] = std::sqrt(bin[n][k]) * std::pow(T, 0.5 * (n - k)) *
                          std::pow(1.0 - T, 0.5 * k);
    }

    const long total = rho.total_dim();
    const long stride = strides_of(rho.dims())[mode];
    std::vector<int> digit(total);
    for (long i = 0; i < total; ++i) digit[i] = static_cast<int>((i / stride) % d);

    const MatrixXcd& in = rho.data();
    MatrixXcd out(total, total);
    for (long c = 0; c < total; ++c) {
        const int nc = digit[c];
        for (long r = 0; r < total; ++r) {
            const int nr = digit[r];
            const int kmax = std::min(d - 1 - nr, d - 1 - nc);
            complex<double> acc = 0.0;
            for (int k = 0; k <= kmax; ++k)
                acc += kappa[nr + k][k] * kappa[nc + k][k] * in(r + k * stride, c + k * stride);
            out(r, c) = acc;
        }
    }
    return FockArray::density(rho.dims(), std::move(out));
}

FockArray beam_splitter(const FockArray& state, int mode_j, int mode_k) {
    if (mode_j == mode_k) throw DomainError("beam splitter needs two distinct modes");
    const int d = state.dims()[mode_j];
    if (state.dims()[mode_k] != d) throw DomainError("beam splitter modes must share a cutoff");
    MatrixXcd u = balanced_beam_splitter_op(d);
    if (mode_j > mode_k) {
        // engine wants ascending modes; permute the operator's index pairs
        MatrixXcd us(d * d, d * d);
        for (int a = 0; a < d; ++a)
            for (int c = 0; c < d; ++c)
                for (int m = 0; m < d; ++m)
                    for (int n = 0; n < d; ++n)
                        us(c * d + a, n * d + m) = u(a * d + c, m * d + n);
        u = std::move(us);
        std::swap(mode_j, mode_k);
    }
    const int modes[2] = {mode_j, mode_k};
    const int out_dims[2] = {d, d};
    return state.applied(u, modes, out_dims);
}

WeightedState fock_filter(const FockArray& rho, int mode, FilterKind kind, double w,
                          double weight_floor) {
    const int d = rho.dims().at(mode);
    MatrixXcd z;
    switch (kind) {
        case FilterKind::n_minus_1:
            z = number_op(d) - MatrixXcd::Identity(d, d);
            break;
        case FilterKind::n_plus_w:
            z = number_op(d) + w * MatrixXcd::Identity(d, d);
            break;
        case FilterKind::annihilate:
            z = annihilation_op(d);
            break;
        case FilterKind::create:
            z = creation_op(d);
            break;
    }
    const double t_in = std::abs(rho.trace());
    const int modes[1] = {mode};
    const int out_dims[1] = {d};
    FockArray out = rho.applied(z, modes, out_dims);
    const double weight = std::abs(out.trace()) / t_in;
    if (weight < weight_floor) {
        std::ostringstream os;
        os << "filter produced weight " << weight << " below floor " << weight_floor;
        throw ZeroWeightError(os.str(), weight);
    }
    return {std::move(out), weight};
}

WeightedState project(const FockArray& rho, int mode, const Projector& target,
                      double weight_floor) {
    const int d = rho.dims().at(mode);
    MatrixXcd bra = MatrixXcd::Zero(1, d);
    if (target.is_q) {
        bra(0, 0) = target.q;
        if (d > 1) bra(0, 1) = 1.0;
    } else {
        bra(0, 0) = 1.0;
    }
    const double t_in = std::abs(rho.trace());
    const int modes[1] = {mode};
    FockArray out = rho.applied(bra, modes, {});
    const double weight = std::abs(out.trace()) / t_in;
    if (weight < weight_floor) {
        std::ostringstream os;
        os << "projection produced weight " << weight << " below floor " << weight_floor;
        throw ZeroWeightError(os.str(), weight);
    }
    return {std::move(out), weight};
}

FockArray partial_trace(const FockArray& rho_in, std::span<const int> modes) {
    const FockArray rho = rho_in.to_density();
    if (modes.empty()) return rho;
    std::vector<int> traced(modes.begin(), modes.end());
    std::sort(traced.begin(), traced.end());
    std::vector<int> kept;
    for (int i = 0; i < rho.num_modes(); ++i)
        if (!std::binary_search(traced.begin(), traced.end(), i)) kept.push_back(i);

    const auto strides = strides_of(rho.dims());
    const auto kept_off = offset_table(rho.dims(), strides, kept);
    const auto traced_off = offset_table(rho.dims(), strides, traced);

    std::vector<int> new_dims;
    for (int i : kept) new_dims.push_back(rho.dims()[i]);
    const long dk = static_cast<long>(kept_off.size());

    MatrixXcd out = MatrixXcd::Zero(dk, dk);
    for (long c = 0; c < dk; ++c)
        for (long r = 0; r < dk; ++r) {
            complex<double> acc = 0.0;
            for (long t : traced_off) acc += rho.data()(kept_off[r] + t, kept_off[c] + t);
            out(r, c) = acc;
        }
    return FockArray::density(std::move(new_dims), std::move(out));
}

CovarianceMatrix covariance_of(const FockArray& rho_in) {
    const FockArray rho = rho_in.to_density().normalized();
    const int n = rho.num_modes();

    // quadrature operators per mode, ordered (x1, p1, ..., xN, pN)
    std::vector<MatrixXcd> quad(2 * n);
    for (int m = 0; m < n; ++m) {
        quad[2 * m] = quadrature_x(rho.dims()[m]);
        quad[2 * m + 1] = quadrature_p(rho.dims()[m]);
    }
    auto mode_of = [](int q) { return q / 2; };

    std::vector<double> first(2 * n);
    for (int q = 0; q < 2 * n; ++q) {
        const int modes[1] = {mode_of(q)};
        first[q] = rho.applied_left(quad[q], modes).trace().real();
    }

    Eigen::MatrixXd g(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) {
            double second;
            if (mode_of(i) == mode_of(j)) {
                const MatrixXcd anti = quad[i] * quad[j] + quad[j] * quad[i];
                const int modes[1] = {mode_of(i)};
                second = rho.applied_left(anti, modes).trace().real();
            } else {
                const int mi[1] = {mode_of(i)};
                const int mj[1] = {mode_of(j)};
                second =
                    2.0 * rho.applied_left(quad[i], mi).applied_left(quad[j], mj).trace().real();
            }
            g(i, j) = g(j, i) = second - 2.0 * first[i] * first[j];
        }
    return CovarianceMatrix(std::move(g));
}

double epsilon_from_rho(const FockArray& rho) {
    if (rho.num_modes() != 2) throw DomainError("epsilon_from_rho requires a two-mode state");
    const int k10[2] = {1, 0};
    const int k11[2] = {1, 1};
    const int k00[2] = {0, 0};
    const complex<double> num = rho.element(k10, k10);
    const complex<double> den = rho.element(k11, k00);
    const double scale = std::abs(rho.element(k00, k00));
    if (std::abs(den) < 1e-13 * std::max(scale, 1e-300))
        throw DomainError("rho_{11,00} vanishes; epsilon undefined");
    return (num / den).real();
}

}  // namespace cvdistill

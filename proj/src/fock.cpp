#include "qi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qi::fock {

void TruncationSpec::validate() const {
    if (dim_signal < 2 || dim_idler < 2 || dim_bath < 2)
        throw dimension_error("TruncationSpec: all mode dimensions must be >= 2");
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0))
        throw domain_error("TruncationSpec: tail_tolerance must lie in (0,1)");
}

DenseOperator::DenseOperator(std::vector<std::string> labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
    if (labels_.size() != dims_.size())
        throw label_error("DenseOperator: one dimension per mode label required");
    std::set<std::string> seen;
    side_ = 1;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (dims_[k] < 1) throw dimension_error("DenseOperator: mode dimension must be >= 1");
        if (!seen.insert(labels_[k]).second)
            throw label_error("DenseOperator: duplicate mode label '" + labels_[k] + "'");
        side_ *= dims_[k];
    }
    entries_.assign(static_cast<std::size_t>(side_) * side_, cplx(0.0, 0.0));
}

DenseOperator DenseOperator::identity(std::vector<std::string> labels, std::vector<int> dims) {
    DenseOperator op(std::move(labels), std::move(dims));
    for (long i = 0; i < op.side_; ++i) op.at(i, i) = 1.0;
    return op;
}

void DenseOperator::check_compatible(const DenseOperator& other) const {
    if (labels_ != other.labels_ || dims_ != other.dims_)
        throw dimension_error("DenseOperator: operands defined on different mode products");
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

DenseOperator& DenseOperator::operator*=(cplx scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    a.check_compatible(b);
    DenseOperator out(a.labels_, a.dims_);
    const long n = a.side_;
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (long j = 0; j < n; ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

DenseOperator DenseOperator::adjoint() const {
    DenseOperator out(labels_, dims_);
    for (long i = 0; i < side_; ++i)
        for (long j = 0; j < side_; ++j) out.at(j, i) = std::conj(at(i, j));
    return out;
}

cplx DenseOperator::trace() const {
    cplx t = 0.0;
    for (long i = 0; i < side_; ++i) t += at(i, i);
    return t;
}

double DenseOperator::hermiticity_defect() const {
    double worst = 0.0;
    for (long i = 0; i < side_; ++i)
        for (long j = i; j < side_; ++j)
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
}

double DenseOperator::max_abs() const {
    double worst = 0.0;
    for (const auto& e : entries_) worst = std::max(worst, std::abs(e));
    return worst;
}

int DenseOperator::label_position(const std::string& label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
        if (labels_[k] == label) return static_cast<int>(k);
    return -1;
}

DenseOperator annihilation_matrix(int dim, const std::string& label) {
    if (dim < 2) throw dimension_error("annihilation_matrix: dim must be >= 2");
    DenseOperator op({label}, {dim});
    for (int n = 1; n < dim; ++n) op.at(n - 1, n) = std::sqrt(static_cast<double>(n));
    return op;
}

DenseOperator creation_matrix(int dim, const std::string& label) {
    return annihilation_matrix(dim, label).adjoint();
}

DenseOperator number_matrix(int dim, const std::string& label) {
    if (dim < 2) throw dimension_error("number_matrix: dim must be >= 2");
    DenseOperator op({label}, {dim});
    for (int n = 0; n < dim; ++n) op.at(n, n) = static_cast<double>(n);
    return op;
}

ThermalSpectrum thermal_state(double mean_photons, int dim) {
    if (mean_photons < 0.0) throw domain_error("thermal_state: mean photon number must be >= 0");
    if (dim < 2) throw dimension_error("thermal_state: dim must be >= 2");
    ThermalSpectrum spec;
    spec.mean_photons = mean_photons;
    spec.dim = dim;
    spec.probabilities.assign(static_cast<std::size_t>(dim), 0.0);
    if (mean_photons == 0.0) {
        spec.probabilities[0] = 1.0;
        spec.raw_tail = 0.0;
        return spec;
    }
    const double t = mean_photons / (mean_photons + 1.0);
    spec.raw_tail = std::pow(t, dim); // exact geometric remainder
    const double scale = (1.0 - t) / (1.0 - spec.raw_tail);
    double w = scale;
    for (int n = 0; n < dim; ++n) {
        spec.probabilities[static_cast<std::size_t>(n)] = w;
        w *= t;
    }
    return spec;
}

ThermalSpectrum thermal_state(double mean_photons, int dim, const TruncationSpec& trunc) {
    trunc.validate();
    ThermalSpectrum spec = thermal_state(mean_photons, dim);
    if (spec.raw_tail > trunc.tail_tolerance)
        throw truncation_error("thermal_state: raw tail mass " + std::to_string(spec.raw_tail) +
                               " exceeds tolerance at dim " + std::to_string(dim));
    return spec;
}

int thermal_dim_for(double mean_photons, double tol) {
    if (mean_photons < 0.0) throw domain_error("thermal_dim_for: mean photon number must be >= 0");
    if (!(tol > 0.0 && tol < 1.0)) throw domain_error("thermal_dim_for: tol must lie in (0,1)");
    if (mean_photons == 0.0) return 2;
    const double t = mean_photons / (mean_photons + 1.0);
    int dim = static_cast<int>(std::ceil(std::log(tol) / std::log(t))) + 1;
    return std::max(dim, 2);
}

DenseOperator thermal_density(const ThermalSpectrum& spectrum, const std::string& label) {
    return diagonal_density(spectrum.probabilities, label);
}

DenseOperator diagonal_density(const std::vector<double>& weights, const std::string& label) {
    const int dim = static_cast<int>(weights.size());
    if (dim < 1) throw dimension_error("diagonal_density: empty weight vector");
    DenseOperator op({label}, {dim});
    for (int n = 0; n < dim; ++n) op.at(n, n) = weights[static_cast<std::size_t>(n)];
    return op;
}

DenseOperator tensor_product(const DenseOperator& a, const DenseOperator& b) {
    for (const auto& lb : b.mode_labels())
        if (a.label_position(lb) >= 0)
            throw label_error("tensor_product: mode label '" + lb + "' appears in both factors");
    std::vector<std::string> labels = a.mode_labels();
    labels.insert(labels.end(), b.mode_labels().begin(), b.mode_labels().end());
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    DenseOperator out(std::move(labels), std::move(dims));
    const long sa = a.side(), sb = b.side();
    for (long ia = 0; ia < sa; ++ia)
        for (long ja = 0; ja < sa; ++ja) {
            const cplx va = a.at(ia, ja);
            if (va == cplx(0.0, 0.0)) continue;
            for (long ib = 0; ib < sb; ++ib)
                for (long jb = 0; jb < sb; ++jb)
                    out.at(ia * sb + ib, ja * sb + jb) = va * b.at(ib, jb);
        }
    return out;
}

DenseOperator partial_trace(const DenseOperator& op, const std::string& traced_label) {
    const int pos = op.label_position(traced_label);
    if (pos < 0) throw label_error("partial_trace: unknown mode label '" + traced_label + "'");
    const auto& dims = op.dims();
    const std::size_t nmodes = dims.size();
    if (nmodes == 1) { // tracing the last mode leaves a 1x1 scalar with no labels
        DenseOperator out({}, {});
        out.at(0, 0) = op.trace();
        return out;
    }

    std::vector<std::string> out_labels;
    std::vector<int> out_dims;
    for (std::size_t k = 0; k < nmodes; ++k) {
        if (static_cast<int>(k) == pos) continue;
        out_labels.push_back(op.mode_labels()[k]);
        out_dims.push_back(dims[k]);
    }
    DenseOperator out(out_labels, out_dims);

    // Split the flat index as (head, traced, tail).
    long tail_stride = 1;
    for (std::size_t k = pos + 1; k < nmodes; ++k) tail_stride *= dims[k];
    const long traced_dim = dims[static_cast<std::size_t>(pos)];
    const long head_count = op.side() / (tail_stride * traced_dim);

    for (long hi = 0; hi < head_count; ++hi)
        for (long ti = 0; ti < tail_stride; ++ti) {
            const long row_out_i = hi * tail_stride + ti;
            for (long hj = 0; hj < head_count; ++hj)
                for (long tj = 0; tj < tail_stride; ++tj) {
                    const long col_out_j = hj * tail_stride + tj;
                    cplx acc = 0.0;
                    for (long m = 0; m < traced_dim; ++m) {
                        const long row = (hi * traced_dim + m) * tail_stride + ti;
                        const long col = (hj * traced_dim + m) * tail_stride + tj;
                        acc += op.at(row, col);
                    }
                    out.at(row_out_i, col_out_j) = acc;
                }
        }
    return out;
}

DenseOperator embed(const std::vector<std::string>& labels, const std::vector<int>& dims,
                    const std::vector<std::pair<std::string, DenseOperator>>& factors) {
    if (labels.size() != dims.size())
        throw label_error("embed: one dimension per mode label required");
    DenseOperator out;
    bool first = true;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const DenseOperator* factor = nullptr;
        for (const auto& [lb, mat] : factors)
            if (lb == labels[k]) factor = &mat;
        DenseOperator piece;
        if (factor != nullptr) {
            if (factor->side() != dims[k])
                throw dimension_error("embed: factor dimension mismatch on '" + labels[k] + "'");
            piece = DenseOperator({labels[k]}, {dims[k]});
            for (long i = 0; i < piece.side(); ++i)
                for (long j = 0; j < piece.side(); ++j) piece.at(i, j) = factor->at(i, j);
        } else {
            piece = DenseOperator::identity({labels[k]}, {dims[k]});
        }
        out = first ? std::move(piece) : tensor_product(out, piece);
        first = false;
    }
    return out;
}

DenseOperator beamsplitter_generator(const std::vector<std::string>& labels,
                                     const std::vector<int>& dims,
                                     const std::string& signal_label,
                                     const std::string& bath_label) {
    int pos_s = -1, pos_b = -1;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == signal_label) pos_s = static_cast<int>(k);
        if (labels[k] == bath_label) pos_b = static_cast<int>(k);
    }
    if (pos_s < 0 || pos_b < 0)
        throw label_error("beamsplitter_generator: signal and bath labels must both be present");
    const int ds = dims[static_cast<std::size_t>(pos_s)];
    const int db = dims[static_cast<std::size_t>(pos_b)];
    if (ds < 2 || db < 2)
        throw dimension_error("beamsplitter_generator: both coupled modes need dim >= 2");

    DenseOperator up = embed(labels, dims,
                             {{signal_label, creation_matrix(ds, signal_label)},
                              {bath_label, annihilation_matrix(db, bath_label)}});
    DenseOperator down = embed(labels, dims,
                               {{signal_label, annihilation_matrix(ds, signal_label)},
                                {bath_label, creation_matrix(db, bath_label)}});
    return up - down;
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
    return a * b - b * a;
}

DenseOperator evolve_small_eta(const DenseOperator& state, const DenseOperator& generator,
                               double eta, int order) {
    if (order != 1 && order != 2)
        throw domain_error("evolve_small_eta: order must be 1 or 2");
    DenseOperator first = commutator(generator, state);
    DenseOperator out = state + first * cplx(eta, 0.0);
    if (order == 2) out += commutator(generator, first) * cplx(0.5 * eta * eta, 0.0);
    return out;
}

cplx expectation(const DenseOperator& observable, const DenseOperator& state) {
    if (observable.mode_labels() != state.mode_labels() || observable.dims() != state.dims())
        throw dimension_error("expectation: operator and state live on different mode products");
    cplx acc = 0.0;
    const long n = observable.side();
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k) acc += observable.at(i, k) * state.at(k, i);
    return acc;
}

} // namespace qi::fock

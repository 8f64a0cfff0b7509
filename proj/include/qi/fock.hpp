#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qi/errors.hpp"

namespace qi::fock {

using cplx = std::complex<double>;

// Fock cutoffs shared by every truncated-space computation.  dim_* count the
// retained levels |0>..|dim-1|; tail_tolerance bounds the probability mass a
// state may carry at and above the first discarded level.
struct TruncationSpec {
    int dim_signal = 2;
    int dim_idler = 2;
    int dim_bath = 2;
    double tail_tolerance = 1e-10;

    void validate() const;
};

// Truncated geometric (thermal) photon-number distribution.  Weights are
// renormalized to sum to one; raw_tail reports the exact discarded mass of
// the untruncated distribution.
struct ThermalSpectrum {
    double mean_photons = 0.0;
    int dim = 0;
    std::vector<double> probabilities;
    double raw_tail = 0.0;
};

// Complex matrix over a labeled tensor product of truncated modes, row-major
// over the lexicographic multi-index (first label most significant).
class DenseOperator {
  public:
    DenseOperator() = default;
    DenseOperator(std::vector<std::string> labels, std::vector<int> dims);

    static DenseOperator identity(std::vector<std::string> labels, std::vector<int> dims);

    long side() const { return side_; }
    const std::vector<std::string>& mode_labels() const { return labels_; }
    const std::vector<int>& dims() const { return dims_; }

    cplx& at(long row, long col) { return entries_[row * side_ + col]; }
    const cplx& at(long row, long col) const { return entries_[row * side_ + col]; }
    const std::vector<cplx>& entries() const { return entries_; }

    DenseOperator& operator+=(const DenseOperator& other);
    DenseOperator& operator-=(const DenseOperator& other);
    DenseOperator& operator*=(cplx scalar);
    friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
    friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
    friend DenseOperator operator*(DenseOperator a, cplx s) { return a *= s; }
    friend DenseOperator operator*(cplx s, DenseOperator a) { return a *= s; }
    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b); // matrix product

    DenseOperator adjoint() const;
    cplx trace() const;
    // Largest entrywise |A - A^dagger|.
    double hermiticity_defect() const;
    double max_abs() const;

    int label_position(const std::string& label) const; // -1 if absent

  private:
    void check_compatible(const DenseOperator& other) const;

    std::vector<std::string> labels_;
    std::vector<int> dims_;
    long side_ = 0;
    std::vector<cplx> entries_;
};

// <n-1|a|n> = sqrt(n) on a single mode.
DenseOperator annihilation_matrix(int dim, const std::string& label = "mode");
DenseOperator creation_matrix(int dim, const std::string& label = "mode");
DenseOperator number_matrix(int dim, const std::string& label = "mode");

ThermalSpectrum thermal_state(double mean_photons, int dim);
ThermalSpectrum thermal_state(double mean_photons, int dim, const TruncationSpec& trunc);
// Smallest dimension whose exact raw tail (t^dim, t = N_B/(N_B+1)) is below tol.
int thermal_dim_for(double mean_photons, double tol);

DenseOperator thermal_density(const ThermalSpectrum& spectrum, const std::string& label);
// Diagonal density matrix from a probability vector.
DenseOperator diagonal_density(const std::vector<double>& weights, const std::string& label);

DenseOperator tensor_product(const DenseOperator& a, const DenseOperator& b);
DenseOperator partial_trace(const DenseOperator& op, const std::string& traced_label);

// Embeds single-mode matrices into the labeled product space; modes not named
// in `factors` get the identity.
DenseOperator embed(const std::vector<std::string>& labels, const std::vector<int>& dims,
                    const std::vector<std::pair<std::string, DenseOperator>>& factors);

// G = a_S^dag b - a_S b^dag on the full space spanned by `labels`.
DenseOperator beamsplitter_generator(const std::vector<std::string>& labels,
                                     const std::vector<int>& dims,
                                     const std::string& signal_label,
                                     const std::string& bath_label);

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);

// rho + eta [G, rho] (+ eta^2/2 [G,[G,rho]] at order 2).
DenseOperator evolve_small_eta(const DenseOperator& state, const DenseOperator& generator,
                               double eta, int order);

cplx expectation(const DenseOperator& observable, const DenseOperator& state);

} // namespace qi::fock

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "latmix/spin_state.hpp"

namespace latmix {

enum class InstanceKind { gaussian, orthogonal, unit_sphere, adversarial, custom };

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& s);

/// An integer least-squares problem instance min_{x in {-1,+1}^n} ||y - Bx||^2.
///
/// `b` is the effective matrix: the SNR scaling sqrt(snr/n) is already folded
/// into it, and `snr` is kept as metadata only. `v` is the noise vector that
/// was actually drawn (all-zero for noiseless instances). Instances are
/// immutable after construction and safe to share across threads.
struct ProblemInstance {
    int n = 0;
    Eigen::MatrixXd b;       // n x n effective matrix
    Eigen::VectorXd y;       // received vector
    double snr = 0.0;        // metadata; not used in the objective
    SpinState x_true;        // transmitted signal, all -1 for generated instances
    Eigen::VectorXd v;       // noise actually drawn
    InstanceKind kind = InstanceKind::custom;
    std::string label;       // generator + parameters, for report provenance

    Eigen::VectorXd column(int j) const { return b.col(j); }
};

/// ||y - B s||^2. Throws std::invalid_argument on dimension mismatch.
double objective(const ProblemInstance& inst, const SpinState& s);

/// i.i.d. N(0,1) channel, b = sqrt(snr/n) * H, x_true = all -1.
/// Noise is drawn from the same stream after H, so toggling with_noise
/// does not change the channel for a given seed.
ProblemInstance gen_gaussian_instance(int n, double snr, std::uint64_t seed, bool with_noise);

/// Haar-random orthogonal H (QR of a Gaussian matrix with the R-diagonal
/// signs folded into Q), b = sqrt(snr/n) * H.
ProblemInstance gen_orthogonal_instance(int n, double snr, std::uint64_t seed, bool with_noise);

/// Columns i.i.d. uniform on the unit sphere S^{n-1}; v = 0; snr fixed to 1.
ProblemInstance gen_unit_sphere_instance(int n, std::uint64_t seed);

/// The exponentially-many-local-minima construction: columns 1..n/2 are the
/// first n/2 standard basis vectors, column i+n/2 = -(1+eps) * column i,
/// y = H * (all -1) with no noise. Requires even n and eps in (0,1).
ProblemInstance gen_adversarial_instance(int n, double eps);

/// Wrap externally supplied data. Generated-instance invariants are not
/// enforced; x_true defaults to all -1 and v defaults to y - b * x_true.
ProblemInstance load_custom_instance(const Eigen::MatrixXd& b_matrix, const Eigen::VectorXd& y,
                                     std::optional<SpinState> x_true = std::nullopt,
                                     std::optional<Eigen::VectorXd> v = std::nullopt);

/// JSON round-trip: {n, snr, kind, b_matrix (row-major), y, x_true_code, v}.
/// Doubles survive the trip bit-exactly.
std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

}  // namespace latmix

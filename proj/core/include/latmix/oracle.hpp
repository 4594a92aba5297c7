#pragma once

#include <string>
#include <vector>

#include "latmix/instance.hpp"

namespace latmix {

/// Objective differences with magnitude <= kTieTolerance are treated as ties:
/// tied states are excluded from the local-minima list and reported as
/// degenerate instead.
inline constexpr double kTieTolerance = 1e-12;

/// Largest n accepted by the exhaustive 2^n scans.
inline constexpr int kExhaustiveMaxN = 20;

struct LocalMinimum {
    SpinState state;
    double objective = 0.0;
    double barrier = 0.0;  // min over neighbors of (neighbor objective - own)
};

struct LocalMinimaReport {
    std::string instance_id;
    std::vector<LocalMinimum> minima;          // sorted by state code
    std::vector<SpinState> global_minima;      // every minimizer within tie tolerance
    double global_objective = 0.0;
    std::vector<SpinState> degenerate;         // non-global states tied with a neighbor
};

/// Objective of every state, indexed by state code. Guarded at n <= 20.
std::vector<double> exhaustive_objectives(const ProblemInstance& inst);

struct GlobalMinimum {
    std::vector<SpinState> states;  // all minimizers within tie tolerance
    double value = 0.0;
};

GlobalMinimum global_minimum(const ProblemInstance& inst);

/// Exhaustive scan for states that are not global minimizers and whose
/// one-coordinate neighbors all have strictly larger objective.
LocalMinimaReport local_minima_bruteforce(const ProblemInstance& inst);

/// Same report computed from a precomputed objective table (table[c] must be
/// the objective of the state with code c).
LocalMinimaReport local_minima_from_table(const ProblemInstance& inst,
                                          const std::vector<double>& table);

/// Algebraic local-minimum test in the all-minus-one frame.
///
/// With K = {i : s_i = +1} and columns h_i of the effective matrix, s is a
/// local minimum iff it is not a global minimum and every margin below is
/// strictly positive:
///   i in K:    ||h_i||^2/2 - h_i' (sum_{j in K} h_j - v/2)
///   i not in K: h_i' (sum_{j in K} h_j - v/2) + ||h_i||^2/2
/// Each margin equals (neighbor objective - own objective) / 8.
struct Lemma1Result {
    bool is_local_min = false;
    bool conditions_hold = false;  // the margin inequalities alone
    bool is_global = false;
    std::vector<double> margins;   // one per coordinate
};

/// Requires inst.x_true = all -1 (the frame the algebra lives in).
/// Computes the global minimum exhaustively; use the overload with a
/// precomputed global value inside loops over many states.
Lemma1Result is_local_min_lemma1(const ProblemInstance& inst, const SpinState& s);
Lemma1Result is_local_min_lemma1(const ProblemInstance& inst, const SpinState& s,
                                 double global_value);

/// Sufficient condition: ||sum_{j in K} h_j - v/2|| < min_i ||h_i|| / 2.
/// Implies the margin inequalities of is_local_min_lemma1, though not the
/// non-global clause.
bool sufficient_condition_lemma3(const ProblemInstance& inst, const SpinState& s);

/// Smallest objective increase over the n neighbors of a verified local
/// minimum. Throws std::invalid_argument if s is not a local minimum.
double barrier(const ProblemInstance& inst, const SpinState& s);

/// {count, minima: [{code, objective, barrier}], global: [codes], degenerate: [codes]}
std::string report_to_json(const LocalMinimaReport& report);

}  // namespace latmix

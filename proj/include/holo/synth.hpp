/*
 * synth.hpp — realise a target gate on the code space as the holonomy of a
 * loop drawn from a parametrised family.
 *
 * Reachable gates form the group generated by span_R{E - F, i(E + F), iH,
 * i(2B - 1)} together with a global phase: block diagonal on
 * {|00>}, {|01>, |10>}, {|11>} with det(middle) = phase(|00>) phase(|11>).
 */
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "holo/holonomy.hpp"

namespace holo {

inline constexpr double kUnitaryInputTol = 1e-8;
inline constexpr double kReachabilityTol = 1e-6;

/// |tr(gamma^dag target)| / 4. Throws std::invalid_argument unless both
/// inputs are unitary within kUnitaryInputTol.
double gate_fidelity(const Matrix4& gamma, const Matrix4& target);

inline constexpr int kReachableGenerators = 5;
/// E - F, i(E + F), iH, i(2B - 1), i 1.
const std::array<Matrix4, kReachableGenerators>& reachable_generators();

struct Reachability {
  bool reachable = false;
  /// Max-entry residual of log(target) after projection on the reachable
  /// algebra.
  double residual = 0.0;
  std::array<double, kReachableGenerators> coefficients{};
  /// Decided by the block-structure test because the logarithm landed on a
  /// branch outside the algebra (or an eigenvalue sits at -1).
  bool structural = false;
};

Reachability reachability(const Matrix4& target, double tol = kReachabilityTol);

class ReachabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LoopFamily {
  std::string name;
  std::vector<double> lower;  // box constraints on theta
  std::vector<double> upper;
  std::function<LoopPath(std::span<const double>)> make;

  int dimension() const { return static_cast<int>(lower.size()); }
  /// Clamp theta into the box.
  std::vector<double> clamp(std::span<const double> theta) const;
};

enum class FamilyKind {
  kXiRectangle,     // (Re xi, Im xi) rectangle at zeta = 0
  kZetaRectangle,   // (Re zeta, Im zeta) rectangle at xi = 0
  kConcatenated,    // the two above, xi loop first
  kMixedRectangle,  // (Re xi, Re zeta) rectangle at Im xi = Im zeta = 0
};

/// Rectangles are theta = (width_u, width_v, offset_u, offset_v), reached from
/// the origin along a straight stem and traversed u, v, -u, -v.
LoopFamily make_family(FamilyKind kind, const Budget& budget = {});
const char* family_name(FamilyKind kind);
FamilyKind parse_family(const std::string& name);

struct SynthOptions {
  int budget = 2000;  // objective evaluations over all restarts
  int restarts = 4;
  int steps = kDefaultSteps;  // transport resolution during the search
  int verify_steps = 1024;    // resolution of the reported gamma
  std::uint64_t seed = 0;
  double goal = 1.0 - 1e-12;  // stop once the fidelity reaches this
};

struct SynthResult {
  std::vector<double> theta;
  double fidelity = 0.0;         // of gamma (recomputed at verify_steps)
  double search_fidelity = 0.0;  // best value seen by the optimiser
  Matrix4 gamma = Matrix4::Identity();
  int evaluations = 0;
  int best_restart = 0;
  std::vector<double> trace;  // best-so-far fidelity after each evaluation
  Reachability reach;
};

/// Nelder–Mead over the family box with seeded restarts; restart 0 starts at
/// theta = 0 (clamped), the others at uniform draws from the box. Throws
/// ReachabilityError when the target lies outside the reachable group.
SynthResult synthesize(const Matrix4& target, const LoopFamily& family, const ConnectionProvider& provider,
                       const SynthOptions& options = {});

}  // namespace holo

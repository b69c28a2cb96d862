#pragma once

#include <cstddef>
#include <optional>
#include <utility>

namespace dogsplat {

enum class Phase { Warmup, Pruning, DoGRefine, Done };

const char* phase_name(Phase phase);

struct SchedulerConfig {
  int prune_start_iter = 15000;
  int total_iters = 30000;
  int check_period = 500;
  int iter_max = 2000;
  double beta = 0.95;
  /// Target primitive count. < 0 derives it from target_ratio and N0.
  long long n_target = -1;
  /// Fraction of N0 to remove when n_target < 0.
  double target_ratio = 0.9;
  /// Longest the pruning phase may run before pruning straight to target.
  int prune_phase_max_iters = 10000;
  /// Snap to target once fewer than this many primitives would remain
  /// above it. < 0 means max(1, 0.5% of N0).
  double min_prune_count = -1.0;
  /// Geometric halving of the removed count per round. When false every
  /// round removes ceil((N0 - N_target) / uniform_rounds).
  bool dynamic_ratio = true;
  int uniform_rounds = 5;
  /// Emit ActivateDoG when the target is reached.
  bool dog_enabled = true;

  void validate() const;
};

struct Action {
  enum class Kind { Continue, EvaluateL1, Prune, ActivateDoG, Finish };
  Kind kind = Kind::Continue;
  double ratio = 0.0;             // Prune: fraction of the current count to remove
  std::size_t target_count = 0;   // Prune: count after the round
  bool forced = false;            // Prune: by Iter_max or the phase deadline

  static Action continue_() { return {}; }
  static Action of(Kind kind) { return Action{kind}; }
};

const char* action_name(Action::Kind kind);

/// Reconstruction-aware pruning schedule as a pure state machine.
///
/// The trainer calls step() once per iteration with the current primitive
/// count. EvaluateL1 asks for the full-training-set L1; the answer is given
/// by a second step() call with the same iteration and the value.
class PruningScheduler {
 public:
  explicit PruningScheduler(SchedulerConfig config);

  Action step(int iter, std::size_t n_current, std::optional<double> l1_full = std::nullopt);

  /// (N_t, R_t) for the next round at the current state.
  std::pair<std::size_t, double> desired_count(std::size_t n_current) const;

  const SchedulerConfig& config() const { return config_; }
  Phase phase() const { return phase_; }
  int round() const { return round_; }
  std::size_t n0() const { return n0_; }
  std::size_t n_target() const { return n_target_; }
  double last_l1() const { return last_l1_; }
  int iters_since_prune(int iter) const { return iter - last_prune_iter_; }
  bool awaiting_l1() const { return pending_eval_; }
  double effective_min_prune_count() const;

 private:
  Action finish_pruning();

  SchedulerConfig config_;
  Phase phase_ = Phase::Warmup;
  int round_ = 1;
  std::size_t n0_ = 0;
  std::size_t n_target_ = 0;
  double last_l1_ = 0.0;
  int last_prune_iter_ = 0;
  int phase_start_iter_ = 0;
  bool pending_eval_ = false;
};

}  // namespace dogsplat

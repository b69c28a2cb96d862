#include "dogsplat/scheduler.hpp"

#include "dogsplat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dogsplat {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Warmup: return "warmup";
    case Phase::Pruning: return "pruning";
    case Phase::DoGRefine: return "dog_refine";
    case Phase::Done: return "done";
  }
  return "?";
}

const char* action_name(Action::Kind kind) {
  switch (kind) {
    case Action::Kind::Continue: return "continue";
    case Action::Kind::EvaluateL1: return "evaluate_l1";
    case Action::Kind::Prune: return "prune";
    case Action::Kind::ActivateDoG: return "activate_dog";
    case Action::Kind::Finish: return "finish";
  }
  return "?";
}

void SchedulerConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw RangeError("beta must lie in (0, 1)");
  if (check_period < 1) throw RangeError("check_period must be positive");
  if (iter_max < check_period) throw RangeError("iter_max must be at least check_period");
  if (prune_start_iter < 0) throw RangeError("prune_start_iter must be non-negative");
  if (total_iters < prune_start_iter) throw RangeError("total_iters must not precede prune_start_iter");
  if (prune_phase_max_iters < 1) throw RangeError("prune_phase_max_iters must be positive");
  if (n_target < 0 && !(target_ratio > 0.0 && target_ratio < 1.0))
    throw RangeError("target_ratio must lie in (0, 1)");
  if (uniform_rounds < 1) throw RangeError("uniform_rounds must be positive");
}

PruningScheduler::PruningScheduler(SchedulerConfig config) : config_(config) { config_.validate(); }

double PruningScheduler::effective_min_prune_count() const {
  if (config_.min_prune_count >= 0.0) return config_.min_prune_count;
  return std::max(1.0, 0.005 * static_cast<double>(n0_));
}

std::pair<std::size_t, double> PruningScheduler::desired_count(std::size_t n_current) const {
  if (n_current <= n_target_) return {n_current, 0.0};
  const double gap = static_cast<double>(n0_ - n_target_);
  long long next = 0;
  if (config_.dynamic_ratio) {
    // N0 - D (1 - 2^-t): the running sum of D / 2^k, free of per-round rounding drift
    const double ideal = static_cast<double>(n0_) - gap * (1.0 - std::ldexp(1.0, -round_));
    next = std::llround(ideal);
  } else {
    const auto per_round = static_cast<long long>(std::ceil(gap / config_.uniform_rounds));
    next = static_cast<long long>(n_current) - per_round;
  }
  next = std::max(next, static_cast<long long>(n_target_));
  if (static_cast<double>(next - static_cast<long long>(n_target_)) < effective_min_prune_count() ||
      next >= static_cast<long long>(n_current))
    next = static_cast<long long>(n_target_);
  const auto n_t = static_cast<std::size_t>(next);
  return {n_t, static_cast<double>(n_current - n_t) / static_cast<double>(n_current)};
}

Action PruningScheduler::finish_pruning() {
  phase_ = Phase::DoGRefine;
  if (config_.dog_enabled) return Action::of(Action::Kind::ActivateDoG);
  return Action::continue_();
}

Action PruningScheduler::step(int iter, std::size_t n_current, std::optional<double> l1_full) {
  if (l1_full && !pending_eval_) throw ProtocolViolation("L1 supplied without a pending evaluation");
  if (!l1_full && pending_eval_) throw ProtocolViolation("pending evaluation was not answered");

  if (phase_ != Phase::Done && iter >= config_.total_iters) {
    pending_eval_ = false;
    phase_ = Phase::Done;
    return Action::of(Action::Kind::Finish);
  }

  switch (phase_) {
    case Phase::Warmup: {
      if (iter < config_.prune_start_iter) return Action::continue_();
      if (!l1_full) {
        pending_eval_ = true;
        return Action::of(Action::Kind::EvaluateL1);
      }
      pending_eval_ = false;
      n0_ = n_current;
      if (config_.n_target >= 0) {
        n_target_ = std::min(static_cast<std::size_t>(config_.n_target), n0_);
      } else {
        n_target_ = n0_ - static_cast<std::size_t>(std::llround(config_.target_ratio * static_cast<double>(n0_)));
      }
      last_l1_ = *l1_full;
      last_prune_iter_ = iter;
      phase_start_iter_ = iter;
      round_ = 1;
      phase_ = Phase::Pruning;
      if (n_current <= n_target_) return finish_pruning();
      return Action::continue_();
    }
    case Phase::Pruning: {
      if (n_current <= n_target_) {
        pending_eval_ = false;
        return finish_pruning();
      }
      if (iter - phase_start_iter_ >= config_.prune_phase_max_iters) {
        pending_eval_ = false;
        Action a = Action::of(Action::Kind::Prune);
        a.target_count = n_target_;
        a.ratio = static_cast<double>(n_current - n_target_) / static_cast<double>(n_current);
        a.forced = true;
        if (l1_full) last_l1_ = *l1_full;
        ++round_;
        last_prune_iter_ = iter;
        return a;
      }
      const int since = iter - last_prune_iter_;
      const bool boundary = since > 0 && (since % config_.check_period == 0 || since >= config_.iter_max);
      if (!boundary) return Action::continue_();
      if (!l1_full) {
        pending_eval_ = true;
        return Action::of(Action::Kind::EvaluateL1);
      }
      pending_eval_ = false;
      const bool improved = *l1_full <= config_.beta * last_l1_;
      const bool forced = since >= config_.iter_max;
      if (!improved && !forced) return Action::continue_();
      const auto [n_t, ratio] = desired_count(n_current);
      Action a = Action::of(Action::Kind::Prune);
      a.target_count = n_t;
      a.ratio = ratio;
      a.forced = !improved;
      last_l1_ = *l1_full;
      ++round_;
      last_prune_iter_ = iter;
      return a;
    }
    case Phase::DoGRefine:
      return Action::continue_();
    case Phase::Done:
      return Action::of(Action::Kind::Finish);
  }
  return Action::continue_();
}

}  // namespace dogsplat

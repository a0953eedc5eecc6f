#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gnnkit/layers.hpp"

namespace gnnkit {

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// L2 penalty added to the gradient (coupled weight decay).
  double weight_decay = 0.0;
};

/// SGD or Adam over a ModelParams collection. Moment buffers are keyed by
/// parameter name.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config) : config_(config) {}

  const OptimizerConfig& config() const noexcept { return config_; }
  long step_count() const noexcept { return t_; }

  void step(ModelParams& params) {
    ++t_;
    for (auto& [name, p] : params) {
      auto value = p.value();
      auto grad = p.grad();
      if (config_.kind == OptimizerKind::sgd) {
        for (std::size_t k = 0; k < value.size(); ++k) {
          value[k] -= config_.learning_rate * (grad[k] + config_.weight_decay * value[k]);
        }
        continue;
      }
      auto& st = state_[name];
      if (st.m.size() != value.size()) {
        st.m.assign(value.size(), 0.0);
        st.v.assign(value.size(), 0.0);
      }
      const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
      const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
      for (std::size_t k = 0; k < value.size(); ++k) {
        const double g = grad[k] + config_.weight_decay * value[k];
        st.m[k] = config_.beta1 * st.m[k] + (1.0 - config_.beta1) * g;
        st.v[k] = config_.beta2 * st.v[k] + (1.0 - config_.beta2) * g * g;
        const double mhat = st.m[k] / c1;
        const double vhat = st.v[k] / c2;
        value[k] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
      }
    }
  }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  OptimizerConfig config_;
  std::map<std::string, Moments> state_;
  long t_ = 0;
};

}  // namespace gnnkit

#pragma once

#include <string>
#include <vector>

#include "grasplite/agent/trainer.hpp"

namespace grasplite::io {

// Fixed column set: epoch,success_rate,critic_loss,actor_loss,orient_threshold,wall_seconds
void write_metrics_csv(const std::vector<agent::EpochMetrics>& metrics,
                       const std::string& path);

}  // namespace grasplite::io

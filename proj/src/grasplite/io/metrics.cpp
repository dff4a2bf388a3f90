#include "grasplite/io/metrics.hpp"

#include <cstdio>
#include <fstream>

#include "grasplite/errors.hpp"

namespace grasplite::io {

void write_metrics_csv(const std::vector<agent::EpochMetrics>& metrics,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open metrics file for writing: " + path);
  out << "epoch,success_rate,critic_loss,actor_loss,orient_threshold,wall_seconds\n";
  char line[256];
  for (const auto& m : metrics) {
    std::snprintf(line, sizeof(line), "%zu,%.6f,%.10g,%.10g,%.10g,%.3f\n", m.epoch,
                  m.success_rate, m.critic_loss, m.actor_loss, m.orient_threshold,
                  m.wall_seconds);
    out << line;
  }
}

}  // namespace grasplite::io

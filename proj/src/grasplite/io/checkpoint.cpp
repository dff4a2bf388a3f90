#include "grasplite/io/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "grasplite/errors.hpp"

namespace grasplite::io {
namespace {

constexpr std::uint32_t kMagic = 0x474C4350;  // "GLCP"

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_doubles(std::ostream& out, const std::vector<double>& v) {
  put_u64(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}
void put_double(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
double get_double(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
std::vector<double> get_doubles(std::istream& in) {
  const std::uint64_t n = get_u64(in);
  if (n > (1ULL << 32)) throw CheckpointError("implausible array length in checkpoint");
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  return v;
}

void put_mlp(std::ostream& out, const neural::MlpParams& p) {
  put_u64(out, p.spec.dims.size());
  for (std::size_t d : p.spec.dims) put_u64(out, d);
  for (neural::Activation a : p.spec.acts) put_u32(out, static_cast<std::uint32_t>(a));
  put_doubles(out, p.data);
}

neural::MlpParams get_mlp(std::istream& in) {
  neural::MlpParams p;
  const std::uint64_t n_dims = get_u64(in);
  if (n_dims < 2 || n_dims > 64) throw CheckpointError("bad layer count in checkpoint");
  p.spec.dims.resize(n_dims);
  for (auto& d : p.spec.dims) d = get_u64(in);
  p.spec.acts.resize(n_dims - 1);
  for (auto& a : p.spec.acts) {
    const std::uint32_t code = get_u32(in);
    if (code > 2) throw CheckpointError("bad activation code in checkpoint");
    a = static_cast<neural::Activation>(code);
  }
  p.data = get_doubles(in);
  p.spec.validate();
  if (p.data.size() != p.spec.param_count()) {
    throw CheckpointError("parameter payload does not match the layer shapes");
  }
  return p;
}

void put_adam(std::ostream& out, const neural::AdamState& st) {
  put_u64(out, st.step);
  put_doubles(out, st.m);
  put_doubles(out, st.v);
}

neural::AdamState get_adam(std::istream& in) {
  neural::AdamState st;
  st.step = get_u64(in);
  st.m = get_doubles(in);
  st.v = get_doubles(in);
  return st;
}

void put_stats(std::ostream& out, const normalizer::RunningStats& st) {
  put_u64(out, st.dim());
  for (bool b : st.mask()) out.put(b ? 1 : 0);
  put_u64(out, st.count());
  put_doubles(out, st.sum());
  put_doubles(out, st.sum_sq());
}

normalizer::RunningStats get_stats(std::istream& in) {
  const std::uint64_t dim = get_u64(in);
  if (dim > (1ULL << 20)) throw CheckpointError("implausible normalizer dim in checkpoint");
  std::vector<bool> mask(dim);
  for (std::uint64_t i = 0; i < dim; ++i) mask[i] = in.get() != 0;
  const std::uint64_t count = get_u64(in);
  auto sum = get_doubles(in);
  auto sum_sq = get_doubles(in);
  return normalizer::RunningStats::from_raw(std::move(mask), count, std::move(sum),
                                            std::move(sum_sq));
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
  put_u32(out, kMagic);
  put_u32(out, Checkpoint::kVersion);
  put_mlp(out, ckpt.actor);
  put_mlp(out, ckpt.critic);
  put_mlp(out, ckpt.target_actor);
  put_mlp(out, ckpt.target_critic);
  put_adam(out, ckpt.actor_opt);
  put_adam(out, ckpt.critic_opt);
  put_stats(out, ckpt.obs_stats);
  put_stats(out, ckpt.goal_stats);
  put_double(out, ckpt.orient_threshold);
  put_double(out, ckpt.final_eval);
  if (!out) throw CheckpointError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  if (get_u32(in) != kMagic) throw CheckpointError("not a checkpoint file: " + path);
  const std::uint32_t version = get_u32(in);
  if (version != Checkpoint::kVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.actor = get_mlp(in);
  ckpt.critic = get_mlp(in);
  ckpt.target_actor = get_mlp(in);
  ckpt.target_critic = get_mlp(in);
  ckpt.actor_opt = get_adam(in);
  ckpt.critic_opt = get_adam(in);
  ckpt.obs_stats = get_stats(in);
  ckpt.goal_stats = get_stats(in);
  ckpt.orient_threshold = get_double(in);
  ckpt.final_eval = get_double(in);
  if (!in) throw CheckpointError("truncated checkpoint: " + path);
  return ckpt;
}

}  // namespace grasplite::io

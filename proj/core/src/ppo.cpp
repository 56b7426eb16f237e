#include "dynlabel/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dynlabel/errors.hpp"
#include "dynlabel/geometry.hpp"

namespace dynlabel::ppo {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min<unsigned>(hw ? hw : 1, 4));
}

}  // namespace

// --- Curriculum --------------------------------------------------------------

int CurriculumSchedule::stages() const {
  if (end < start) throw UsageError("curriculum: end < start");
  if (end == start) return 1;
  if (step_size <= 0 || (end - start) % step_size != 0)
    throw UsageError("curriculum: step size must divide (end - start)");
  return (end - start) / step_size + 1;
}

int CurriculumSchedule::num_agents_at(uint64_t global_step,
                                      uint64_t total_steps) const {
  int n_stages = stages();
  if (n_stages == 1) return start;
  uint64_t stage_len = total_steps / static_cast<uint64_t>(n_stages);
  if (stage_len == 0) return end;
  uint64_t stage = global_step / stage_len;
  if (stage >= static_cast<uint64_t>(n_stages)) stage = n_stages - 1;
  return start + step_size * static_cast<int>(stage);
}

std::vector<uint64_t> CurriculumSchedule::boundaries(uint64_t total_steps) const {
  int n_stages = stages();
  std::vector<uint64_t> out;
  uint64_t stage_len = total_steps / static_cast<uint64_t>(n_stages);
  for (int s = 1; s < n_stages; ++s) out.push_back(stage_len * s);
  return out;
}

int advance_curriculum(const CurriculumSchedule& schedule, uint64_t global_step,
                       uint64_t total_steps) {
  return schedule.num_agents_at(global_step, total_steps);
}

// --- GAE ---------------------------------------------------------------------

GaeResult compute_gae(const EpisodeBuffer& buffer, double gamma, double lambda) {
  GaeResult out;
  size_t total = buffer.transition_count();
  out.advantages.resize(total);
  out.returns.resize(total);
  size_t base = 0;
  for (const auto& stream : buffer.streams) {
    size_t n = stream.transitions.size();
    double next_value = stream.truncated ? stream.bootstrap_value : 0.0;
    double gae = 0.0;
    for (size_t k = n; k-- > 0;) {
      const Transition& t = stream.transitions[k];
      double delta = t.reward + gamma * next_value - t.value;
      gae = delta + gamma * lambda * gae;
      out.advantages[base + k] = gae;
      out.returns[base + k] = gae + t.value;
      next_value = t.value;
    }
    base += n;
  }
  return out;
}

// --- Rollouts ------------------------------------------------------------------

struct RolloutPool::Worker {
  Rng rng;
  policy::Policy::Scratch scratch;

  explicit Worker(uint64_t seed) : rng(seed) {}
};

RolloutPool::~RolloutPool() = default;

RolloutPool::RolloutPool(const std::vector<data::Scene>& scenes,
                         const run::EnvConfig& env, int num_worlds,
                         int episode_len, double abort_penalty, uint64_t seed)
    : scenes_(&scenes),
      env_(env),
      episode_len_(episode_len),
      abort_penalty_(abort_penalty) {
  if (scenes.empty()) throw UsageError("rollout pool: no scenes");
  if (num_worlds <= 0) throw UsageError("rollout pool: num_worlds must be > 0");
  Rng master(seed);
  for (int w = 0; w < num_worlds; ++w)
    workers_.push_back(std::make_unique<Worker>(master.split(w).next_u64()));
}

namespace {

// One episode from one worker: pick a scene and a labeled-track subset, roll
// the shared policy, and emit one stream per label.
std::vector<Stream> run_episode(const std::vector<data::Scene>& scenes,
                                const run::EnvConfig& env, int episode_len,
                                double abort_penalty,
                                const policy::Policy& policy, int num_agents,
                                Rng& rng, policy::Policy::Scratch& scratch,
                                uint64_t* steps_taken) {
  const data::Scene& scene = scenes[rng.uniform_index(scenes.size())];

  std::vector<std::string> eligible;
  for (const auto& t : scene.tracks)
    if (t.entry_step == 0 && t.exit_step == scene.num_steps)
      eligible.push_back(t.id);
  if (eligible.empty())
    throw DataError("rollout: scene '" + scene.scene_id +
                    "' has no full-coverage tracks");
  rng.shuffle(eligible);
  size_t n_labels = std::min<size_t>(num_agents, eligible.size());
  eligible.resize(n_labels);

  sim::World world(scene, env.sim, env.camera, eligible);
  const geom::Projector& proj = world.projector();

  std::vector<Stream> streams(n_labels);
  std::vector<enc::EncodedObservation> obs(n_labels);
  for (size_t i = 0; i < n_labels; ++i)
    obs[i] = enc::encode_observation(world.state(), env.sim, proj, env.encoder, i);

  int max_steps = std::min(episode_len, scene.num_steps);
  std::vector<sim::Action> actions(n_labels);
  uint64_t steps = 0;
  for (int t = 0; t < max_steps; ++t) {
    // All labels act from the shared policy (decentralized execution).
    for (size_t i = 0; i < n_labels; ++i) {
      if (!obs[i].valid) continue;  // aborted below before this can happen
      policy::PolicyDecision d =
          policy.act(obs[i], policy::ActMode::stochastic, rng, scratch);
      actions[i] = d.action;
      Transition tr;
      tr.obs = obs[i];
      tr.action = d.action;
      tr.log_prob = d.log_prob;
      tr.value = d.value;
      streams[i].transitions.push_back(std::move(tr));
    }

    world.step(actions);
    ++steps;
    auto counts = geom::measure_step(world.state(), env.sim, proj);
    bool abort = false;
    for (size_t i = 0; i < n_labels; ++i) {
      streams[i].transitions.back().reward =
          metrics::reward(counts[i], actions[i], env.sim.max_acc, env.reward)
              .total;
      obs[i] = enc::encode_observation(world.state(), env.sim, proj,
                                       env.encoder, i);
      if (!obs[i].valid) abort = true;
    }

    bool clock_end = (t == max_steps - 1) || world.finished();
    if (abort || clock_end) {
      for (size_t i = 0; i < n_labels; ++i) {
        Transition& last = streams[i].transitions.back();
        last.done = true;
        if (!obs[i].valid) {
          // Observation left the frustum: terminal failure, no bootstrap.
          last.reward += abort_penalty;
          streams[i].truncated = false;
          streams[i].bootstrap_value = 0.0;
        } else {
          // Ended on the clock: bootstrap from the value of the final state.
          streams[i].truncated = true;
          streams[i].bootstrap_value =
              policy.evaluate(obs[i], sim::Action{}, scratch).value;
        }
      }
      break;
    }
  }
  *steps_taken = steps;
  return streams;
}

}  // namespace

EpisodeBuffer RolloutPool::collect(const policy::Policy& policy, int num_agents,
                                   uint64_t n_env_steps, int threads) {
  EpisodeBuffer buffer;
  int n_threads = std::min<int>(resolve_threads(threads),
                                static_cast<int>(workers_.size()));
  while (buffer.env_steps < n_env_steps) {
    std::vector<std::vector<Stream>> results(workers_.size());
    std::vector<uint64_t> steps(workers_.size(), 0);
    auto run_worker = [&](size_t w) {
      results[w] = run_episode(*scenes_, env_, episode_len_, abort_penalty_,
                               policy, num_agents, workers_[w]->rng,
                               workers_[w]->scratch, &steps[w]);
    };
    if (n_threads <= 1) {
      for (size_t w = 0; w < workers_.size(); ++w) run_worker(w);
    } else {
      std::vector<std::thread> pool;
      for (size_t w = 0; w < workers_.size(); ++w)
        pool.emplace_back(run_worker, w);
      for (auto& th : pool) th.join();
    }
    // Merge in worker order: content is independent of thread scheduling.
    for (size_t w = 0; w < workers_.size(); ++w) {
      for (auto& s : results[w]) buffer.streams.push_back(std::move(s));
      buffer.env_steps += steps[w];
      if (buffer.env_steps >= n_env_steps) break;
    }
  }
  return buffer;
}

EpisodeBuffer collect_rollouts(RolloutPool& pool, const policy::Policy& policy,
                               int num_agents, uint64_t n_env_steps,
                               int threads) {
  return pool.collect(policy, num_agents, n_env_steps, threads);
}

// --- PPO update ----------------------------------------------------------------

namespace {

struct FlatSample {
  const Transition* t;
  double advantage;
  double ret;
};

struct ThreadAccum {
  std::vector<float> actor_grads;
  std::vector<float> critic_grads;
  policy::Policy::Scratch scratch;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;

  void reset_losses() { actor_loss = critic_loss = entropy = 0.0; }
};

void process_sample(const policy::Policy& policy, const FlatSample& s,
                    const PpoConfig& cfg, double inv_batch, ThreadAccum& acc) {
  const enc::EncodedObservation& obs = s.t->obs;
  const float* neigh = obs.neighbors.empty() ? nullptr : obs.neighbors.front().data();
  size_t n = obs.neighbors.size();

  // Actor: clipped surrogate + entropy bonus.
  policy.actor().forward(obs.self.data(), neigh, n, acc.scratch.actor);
  float mu[2], log_std[2];
  bool clamped[2];
  nn::split_gaussian_head(acc.scratch.actor.out.data(), mu, log_std, clamped);
  float a[2] = {static_cast<float>(s.t->action.a.x),
                static_cast<float>(s.t->action.a.y)};
  double lp_new = nn::gaussian_log_prob2(mu, log_std, a);
  double entropy = nn::gaussian_entropy2(log_std);
  double ratio = std::exp(lp_new - s.t->log_prob);
  double l1 = ratio * s.advantage;
  double clipped = std::min(std::max(ratio, 1.0 - cfg.clip_eps), 1.0 + cfg.clip_eps);
  double l2 = clipped * s.advantage;
  double objective = std::min(l1, l2);
  acc.actor_loss += (-objective - cfg.entropy_coef * entropy) * inv_batch;
  acc.entropy += entropy * inv_batch;

  // d(loss)/d(log pi): gradient flows only through the unclipped branch.
  double d_lp = (l1 <= l2) ? -(ratio * s.advantage) * inv_batch : 0.0;
  double d_mu[2], d_ls[2];
  nn::gaussian_log_prob2_grad(mu, log_std, a, d_mu, d_ls);
  float d_out4[4];
  for (int k = 0; k < 2; ++k) {
    d_out4[k] = static_cast<float>(d_lp * d_mu[k]);
    double g = d_lp * d_ls[k] - cfg.entropy_coef * inv_batch;
    d_out4[2 + k] = clamped[k] ? 0.0f : static_cast<float>(g);
  }
  policy.actor().backward(obs.self.data(), neigh, n, acc.scratch.actor, d_out4,
                          acc.actor_grads.data());

  // Critic: squared error against the lambda-return.
  policy.critic().forward(obs.self.data(), neigh, n, acc.scratch.critic);
  double v = acc.scratch.critic.out[0];
  double err = v - s.ret;
  acc.critic_loss += err * err * inv_batch;
  float d_v = static_cast<float>(cfg.value_coef * 2.0 * err * inv_batch);
  policy.critic().backward(obs.self.data(), neigh, n, acc.scratch.critic, &d_v,
                           acc.critic_grads.data());
}

}  // namespace

LossReport ppo_update(policy::Policy& policy, nn::Adam<float>& actor_opt,
                      nn::Adam<float>& critic_opt, const EpisodeBuffer& buffer,
                      const PpoConfig& cfg, double lr, Rng& rng, int threads) {
  GaeResult gae = compute_gae(buffer, cfg.gamma, cfg.lambda);

  std::vector<FlatSample> samples;
  samples.reserve(gae.advantages.size());
  {
    size_t idx = 0;
    for (const auto& stream : buffer.streams)
      for (const auto& t : stream.transitions) {
        samples.push_back({&t, gae.advantages[idx], gae.returns[idx]});
        ++idx;
      }
  }
  if (samples.empty()) throw UsageError("ppo_update: empty buffer");

  // Advantages normalized per update batch.
  double mean = 0.0;
  for (const auto& s : samples) mean += s.advantage;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (const auto& s : samples) {
    double d = s.advantage - mean;
    var += d * d;
  }
  double stddev = std::sqrt(var / static_cast<double>(samples.size()));
  for (auto& s : samples) s.advantage = (s.advantage - mean) / (stddev + 1e-8);

  int n_threads = resolve_threads(threads);
  std::vector<ThreadAccum> accums(n_threads);
  for (auto& a : accums) {
    a.actor_grads.assign(policy.actor().store().size(), 0.0f);
    a.critic_grads.assign(policy.critic().store().size(), 0.0f);
  }

  std::vector<size_t> order(samples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  LossReport report;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      size_t end = std::min(order.size(), start + cfg.batch_size);
      double inv_batch = 1.0 / static_cast<double>(end - start);

      auto work = [&](int tid) {
        ThreadAccum& acc = accums[tid];
        std::fill(acc.actor_grads.begin(), acc.actor_grads.end(), 0.0f);
        std::fill(acc.critic_grads.begin(), acc.critic_grads.end(), 0.0f);
        acc.reset_losses();
        for (size_t k = start + tid; k < end; k += n_threads)
          process_sample(policy, samples[order[k]], cfg, inv_batch, acc);
      };
      if (n_threads <= 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
      }

      // Fixed-order reduction into the stores keeps updates deterministic for
      // a given thread count.
      policy.actor().store().zero_grads();
      policy.critic().store().zero_grads();
      float* ag = policy.actor().store().grads();
      float* cg = policy.critic().store().grads();
      double batch_actor = 0.0, batch_critic = 0.0, batch_entropy = 0.0;
      for (const auto& acc : accums) {
        for (size_t i = 0; i < acc.actor_grads.size(); ++i)
          ag[i] += acc.actor_grads[i];
        for (size_t i = 0; i < acc.critic_grads.size(); ++i)
          cg[i] += acc.critic_grads[i];
        batch_actor += acc.actor_loss;
        batch_critic += acc.critic_loss;
        batch_entropy += acc.entropy;
      }
      if (!std::isfinite(batch_actor) || !std::isfinite(batch_critic))
        throw DivergenceError("ppo_update: non-finite loss");

      // Joint gradient-norm clip across both networks.
      double norm_sq = 0.0;
      for (size_t i = 0; i < policy.actor().store().size(); ++i)
        norm_sq += static_cast<double>(ag[i]) * ag[i];
      for (size_t i = 0; i < policy.critic().store().size(); ++i)
        norm_sq += static_cast<double>(cg[i]) * cg[i];
      double norm = std::sqrt(norm_sq);
      if (norm > cfg.grad_clip && norm > 0.0) {
        float scale = static_cast<float>(cfg.grad_clip / norm);
        for (size_t i = 0; i < policy.actor().store().size(); ++i) ag[i] *= scale;
        for (size_t i = 0; i < policy.critic().store().size(); ++i) cg[i] *= scale;
      }

      actor_opt.step(policy.actor().store(), lr);
      critic_opt.step(policy.critic().store(), lr);

      report.actor_loss += batch_actor;
      report.critic_loss += batch_critic;
      report.entropy += batch_entropy;
      ++report.minibatches;
    }
  }
  if (report.minibatches > 0) {
    report.actor_loss /= static_cast<double>(report.minibatches);
    report.critic_loss /= static_cast<double>(report.minibatches);
    report.entropy /= static_cast<double>(report.minibatches);
  }
  return report;
}

// --- Training loop ---------------------------------------------------------------

namespace {

double evaluate_policy(const policy::Policy& policy,
                       const std::vector<data::Scene>& scenes,
                       const run::EnvConfig& env) {
  if (scenes.empty()) return 0.0;
  run::Controller ctl;
  ctl.kind = run::ControllerKind::rl;
  ctl.policy = &policy;
  ctl.mode = policy::ActMode::deterministic;
  double total = 0.0;
  for (const auto& scene : scenes)
    total += run::run_scene(scene, env, ctl).mean_episode_reward;
  return total / static_cast<double>(scenes.size());
}

std::string checkpoint_name(const std::string& out_dir, uint64_t step) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "checkpoint_%010llu.bin",
                static_cast<unsigned long long>(step));
  return out_dir + "/" + buf;
}

}  // namespace

TrainResult train(const PpoConfig& cfg, const CurriculumSchedule& curriculum,
                  const run::EnvConfig& env, const policy::PolicyConfig& pcfg,
                  const std::vector<data::Scene>& train_scenes,
                  const std::vector<data::Scene>& test_scenes,
                  const std::string& out_dir, uint64_t seed) {
  if (train_scenes.empty()) throw UsageError("train: no training scenes");
  std::filesystem::create_directories(out_dir);

  Rng master(seed);
  policy::Policy policy(pcfg, master.next_u64());
  nn::Adam<float> actor_opt, critic_opt;
  nn::LinearLr lr_schedule{cfg.lr0, cfg.total_steps};
  RolloutPool pool(train_scenes, env, cfg.num_worlds, cfg.episode_len,
                   cfg.abort_penalty, master.next_u64());
  Rng update_rng(master.next_u64());

  TrainResult result;
  result.log_path = out_dir + "/train_log.csv";
  std::ofstream log(result.log_path);
  if (!log) throw DataError("train: cannot write '" + result.log_path + "'");
  log << "global_step,train_reward,test_reward,actor_loss,critic_loss,entropy,"
         "num_agent,lr\n";

  uint64_t global_step = 0;
  uint64_t next_eval = 0;
  uint64_t next_checkpoint = cfg.checkpoint_interval;
  double test_reward = 0.0;
  int prev_stage_agents = curriculum.num_agents_at(0, cfg.total_steps);

  while (global_step < cfg.total_steps) {
    int num_agents = advance_curriculum(curriculum, global_step, cfg.total_steps);
    if (num_agents != prev_stage_agents) {
      // Stage boundary: snapshot before the harder stage begins.
      save_checkpoint(policy, checkpoint_name(out_dir, global_step));
      prev_stage_agents = num_agents;
    }

    uint64_t need_steps =
        std::max<uint64_t>(1, cfg.buffer_size / std::max(1, num_agents));
    EpisodeBuffer buffer =
        pool.collect(policy, num_agents, need_steps, cfg.threads);
    global_step += buffer.env_steps;

    double train_reward = 0.0;
    for (const auto& s : buffer.streams) {
      double sum = 0.0;
      for (const auto& t : s.transitions) sum += t.reward;
      train_reward += sum;
    }
    train_reward /= static_cast<double>(buffer.streams.size());

    double lr = lr_schedule.at(global_step);
    LossReport losses = ppo_update(policy, actor_opt, critic_opt, buffer, cfg,
                                   lr, update_rng, cfg.threads);

    if (global_step >= next_eval) {
      test_reward = evaluate_policy(policy, test_scenes, env);
      next_eval += cfg.eval_interval;
    }
    if (cfg.checkpoint_interval > 0 && global_step >= next_checkpoint) {
      save_checkpoint(policy, checkpoint_name(out_dir, global_step));
      next_checkpoint += cfg.checkpoint_interval;
    }

    TrainLogRow row{global_step, train_reward, test_reward,
                    losses.actor_loss, losses.critic_loss, losses.entropy,
                    num_agents, lr};
    result.log.push_back(row);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%llu,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.9g\n",
                  static_cast<unsigned long long>(row.global_step),
                  row.train_reward, row.test_reward, row.actor_loss,
                  row.critic_loss, row.entropy, row.num_agent, row.lr);
    log << buf;
  }

  result.final_checkpoint = out_dir + "/checkpoint_final.bin";
  save_checkpoint(policy, result.final_checkpoint);
  return result;
}

}  // namespace dynlabel::ppo

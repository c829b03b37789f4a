// Copyright 2026 The hwpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic pen-tablet cohorts. Controls write with smooth low-frequency
// trajectories; parkinsonian subjects get an additive 5-7 Hz tremor, smaller
// letters, slower movement and a noisier pressure profile.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hwpd/ingest.hpp"

namespace hwpd::ingest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::int64_t kSampleMs = 5;  // 200 Hz digitizer
constexpr double kUnit = 1000.0;       // tablet units per nominal letter unit
constexpr double kOriginX = 4000.0;
constexpr double kOriginY = 6000.0;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Profile {
  bool pd = false;
  double size = 1.0;
  double speed = 1.0;
  double pressure_level = 550.0;
  double tremor_hz = 0.0;
  double tremor_amp = 0.0;
  double tremor_phase_x = 0.0;
  double tremor_phase_y = 0.0;
  double pressure_mod = 0.0;    // relative tremor-locked pressure modulation
  double pressure_noise = 0.0;  // relative white pressure noise
  double air_slowdown = 1.0;
  double progressive_shrink = 0.0;
};

Profile draw_profile(Rng& rng, bool pd) {
  Profile p;
  p.pd = pd;
  p.size = uniform(rng, 0.85, 1.15);
  p.speed = uniform(rng, 0.85, 1.15);
  p.pressure_level = uniform(rng, 450.0, 650.0);
  if (pd) {
    p.size *= uniform(rng, 0.4, 0.8);
    p.speed *= uniform(rng, 0.5, 0.8);
    p.pressure_level *= uniform(rng, 0.8, 1.0);
    p.tremor_hz = uniform(rng, 5.0, 7.0);
    p.tremor_amp = uniform(rng, 15.0, 40.0);
    p.tremor_phase_x = uniform(rng, 0.0, kTwoPi);
    p.tremor_phase_y = uniform(rng, 0.0, kTwoPi);
    p.pressure_mod = uniform(rng, 0.06, 0.12);
    p.pressure_noise = uniform(rng, 0.02, 0.04);
    p.air_slowdown = uniform(rng, 1.2, 1.6);
    p.progressive_shrink = uniform(rng, 0.1, 0.25);
  }
  return p;
}

// A planned on-surface stroke: a parametric curve over u in [0, 1] relative to
// its own anchor, plus its nominal duration at unit speed.
struct StrokePlan {
  enum class Shape { kSpiral, kCursive, kBar, kDot } shape = Shape::kCursive;
  double anchor_x = 0.0;  // nominal units
  double anchor_y = 0.0;
  double duration = 1.0;  // seconds at speed 1
  std::vector<double> heights;  // cursive: one letter height per loop
  double letter_width = 0.6;
  double turns = 4.0;  // spiral
  double radius = 4.0;
  double length = 0.6;  // bar
};

std::vector<double> repeat(std::initializer_list<double> pattern, int times) {
  std::vector<double> out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), pattern);
  return out;
}

StrokePlan cursive(double ax, double ay, std::vector<double> heights,
                   double loop_seconds = 0.3) {
  StrokePlan s;
  s.shape = StrokePlan::Shape::kCursive;
  s.anchor_x = ax;
  s.anchor_y = ay;
  s.duration = loop_seconds * static_cast<double>(heights.size());
  s.heights = std::move(heights);
  return s;
}

StrokePlan bar(double ax, double ay, double length) {
  StrokePlan s;
  s.shape = StrokePlan::Shape::kBar;
  s.anchor_x = ax;
  s.anchor_y = ay;
  s.length = length;
  s.duration = 0.2;
  return s;
}

StrokePlan dot(double ax, double ay) {
  StrokePlan s;
  s.shape = StrokePlan::Shape::kDot;
  s.anchor_x = ax;
  s.anchor_y = ay;
  s.duration = 0.12;
  return s;
}

double word_width(const std::vector<double>& heights) {
  return 0.6 * static_cast<double>(heights.size());
}

// Template tasks: spiral, repeated loops, syllables, two words and a
// multi-word sentence (the only task that needs several pen lifts).
std::vector<StrokePlan> plan_task(int task) {
  switch (task) {
    case 1: {
      StrokePlan s;
      s.shape = StrokePlan::Shape::kSpiral;
      s.anchor_x = 4.5;
      s.anchor_y = 0.0;
      s.turns = 4.0;
      s.radius = 4.0;
      s.duration = 5.0;
      return {s};
    }
    case 2:
      return {cursive(0.0, 0.0, std::vector<double>(8, 2.0), 0.35)};
    case 3:
      return {cursive(0.0, 0.0, repeat({2.0, 1.0}, 4))};
    case 4:
      return {cursive(0.0, 0.0, repeat({2.0, 1.0, 1.0}, 3))};
    case 5: {
      std::vector<double> h = {2.0, 1.0, 2.0, 1.6, 1.0, 1.0, 2.0, 1.0};
      return {cursive(0.0, 0.0, h), bar(0.6 * 3 + 0.1, 1.3, 0.5)};
    }
    case 6: {
      std::vector<double> h = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.6};
      return {cursive(0.0, 0.0, h), bar(0.6 * 7 + 0.1, 1.3, 0.5)};
    }
    case 7: {
      std::vector<StrokePlan> out;
      double x = 0.0;
      const std::vector<std::vector<double>> words = {
          {2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.8},
          {2.0, 1.0, 1.0, 1.0},
          {1.0, 1.0},
          {1.0, 1.0, 1.0, 1.0, 1.8, 1.0, 2.0, 1.0}};
      for (std::size_t w = 0; w < words.size(); ++w) {
        out.push_back(cursive(x, 0.0, words[w]));
        if (w == 0) {
          out.push_back(bar(x - 0.3, 2.1, 0.9));
          out.push_back(dot(x + 0.6 * 6 + 0.3, 1.5));
        } else if (w == 2) {
          out.push_back(dot(x + 0.6 * 1 + 0.3, 1.5));
        } else if (w == 3) {
          out.push_back(dot(x + 0.6 * 4 + 0.3, 1.5));
        }
        x += word_width(words[w]) + 0.8;
      }
      return out;
    }
    default:
      return {};
  }
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Position on a stroke (nominal units, before subject scaling) at phase u.
Point stroke_point(const StrokePlan& s, double u) {
  switch (s.shape) {
    case StrokePlan::Shape::kSpiral: {
      double r = s.radius * u;
      double th = kTwoPi * s.turns * u;
      return {s.anchor_x + r * std::cos(th), s.anchor_y + r * std::sin(th)};
    }
    case StrokePlan::Shape::kCursive: {
      const double k = static_cast<double>(s.heights.size());
      std::size_t letter =
          std::min(s.heights.size() - 1, static_cast<std::size_t>(u * k));
      double phase = kTwoPi * k * u;
      double width = s.letter_width * k;
      double x = s.anchor_x + width * u - 0.25 * s.letter_width * std::sin(phase);
      double y = s.anchor_y + s.heights[letter] * 0.5 * (1.0 - std::cos(phase));
      return {x, y};
    }
    case StrokePlan::Shape::kBar:
      return {s.anchor_x + s.length * u, s.anchor_y + 0.05 * u};
    case StrokePlan::Shape::kDot:
      return {s.anchor_x + 0.06 * std::sin(std::numbers::pi * u),
              s.anchor_y - 0.08 * u};
  }
  return {};
}

class RecordingBuilder {
 public:
  RecordingBuilder(const Profile& profile, Rng& rng)
      : profile_(profile), rng_(rng) {
    wobble_phase_ = uniform(rng, 0.0, kTwoPi);
    wobble_hz_ = uniform(rng, 0.2, 0.4);
  }

  double now() const { return static_cast<double>(t_ms_) / 1000.0; }

  // Appends one sample whose nominal position is `pos` (tablet units).
  void emit(Point pos, bool on_surface, double pressure) {
    const double t = now();
    if (profile_.tremor_amp > 0.0) {
      double env = 1.0 + 0.3 * std::sin(kTwoPi * 0.4 * t);
      double w = kTwoPi * profile_.tremor_hz * t;
      pos.x += profile_.tremor_amp * env * std::sin(w + profile_.tremor_phase_x);
      pos.y += 0.8 * profile_.tremor_amp * env *
               std::sin(w + profile_.tremor_phase_y);
    }
    PenSample s;
    s.x = static_cast<int>(std::lround(pos.x));
    s.y = static_cast<int>(std::lround(pos.y));
    s.t_ms = t_ms_;
    s.pen_state = on_surface ? 1 : 0;
    s.azimuth = 900;
    s.altitude = on_surface ? 550 : 500;
    s.pressure =
        on_surface ? std::clamp(static_cast<int>(std::lround(pressure)), 1,
                                kMaxPressure)
                   : 0;
    samples_.push_back(s);
    t_ms_ += kSampleMs;
  }

  // Pressure along a stroke of the given duration at local time tau.
  double pressure_at(double tau, double duration, double rise, double fall,
                     double phase) {
    auto smooth = [](double z) {
      z = std::clamp(z, 0.0, 1.0);
      return z * z * (3.0 - 2.0 * z);
    };
    double env = smooth(tau / rise) * smooth((duration - tau) / fall);
    double level = profile_.pressure_level *
                   (1.0 + 0.04 * std::sin(kTwoPi * 0.7 * now() + phase));
    if (profile_.pd) {
      level += profile_.pressure_level *
               (profile_.pressure_mod *
                    std::sin(kTwoPi * profile_.tremor_hz * now() + phase) +
                profile_.pressure_noise *
                    std::normal_distribution<double>(0.0, 1.0)(rng_));
    }
    return std::max(1.0, env * level);
  }

  Point scale(Point nominal, double progress) const {
    double shrink = 1.0 - profile_.progressive_shrink * progress;
    double wobble = 1.0 + 0.05 * std::sin(kTwoPi * wobble_hz_ * now() +
                                          wobble_phase_);
    double scale = kUnit * profile_.size * shrink;
    return {kOriginX + scale * nominal.x,
            kOriginY + scale * nominal.y * wobble};
  }

  void write_stroke(const StrokePlan& plan, double progress) {
    double duration = plan.duration / profile_.speed;
    std::size_t n = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::lround(duration * 1000.0 / kSampleMs)));
    double rise = uniform(rng_, 0.03, 0.06);
    double fall = uniform(rng_, 0.03, 0.06);
    double phase = uniform(rng_, 0.0, kTwoPi);
    rise = std::min(rise, 0.3 * duration);
    fall = std::min(fall, 0.3 * duration);
    for (std::size_t i = 0; i < n; ++i) {
      double u = static_cast<double>(i) / static_cast<double>(n - 1);
      double tau = u * duration;
      Point p = scale(stroke_point(plan, u), progress);
      emit(p, true, pressure_at(tau, duration, rise, fall, phase));
    }
    last_ = scale(stroke_point(plan, 1.0), progress);
  }

  // Minimum-jerk pen-up transfer between two tablet positions.
  void write_air(Point from, Point to, double base_seconds) {
    double dist = std::hypot(to.x - from.x, to.y - from.y);
    double duration = (base_seconds + dist / (10.0 * kUnit)) *
                      profile_.air_slowdown / profile_.speed;
    std::size_t n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(duration * 1000.0 / kSampleMs)));
    double lift = 0.15 * kUnit * profile_.size;
    for (std::size_t i = 1; i <= n; ++i) {
      double tau = static_cast<double>(i) / static_cast<double>(n + 1);
      double s = tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
      Point p{from.x + (to.x - from.x) * s,
              from.y + (to.y - from.y) * s + lift * std::sin(std::numbers::pi * tau)};
      emit(p, false, 0.0);
    }
  }

  Point last() const { return last_; }

  std::vector<PenSample> take() { return std::move(samples_); }

 private:
  const Profile& profile_;
  Rng& rng_;
  std::int64_t t_ms_ = 0;
  double wobble_phase_ = 0.0;
  double wobble_hz_ = 0.3;
  Point last_{};
  std::vector<PenSample> samples_;
};

PenRecording synthesize_recording(const Profile& profile, std::string id,
                                  int task, Rng& rng) {
  PenRecording rec;
  rec.subject_id = std::move(id);
  rec.task_id = task;
  rec.label = profile.pd ? Label::kPD : Label::kControl;

  RecordingBuilder b(profile, rng);
  auto plans = plan_task(task);
  double total = 0.0;
  for (const auto& p : plans) total += p.duration;
  double done = 0.0;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    double progress = total > 0.0 ? done / total : 0.0;
    Point start = b.scale(stroke_point(plans[k], 0.0), progress);
    Point from = k == 0 ? Point{start.x - 0.5 * kUnit, start.y + 0.8 * kUnit}
                        : b.last();
    b.write_air(from, start, k == 0 ? 0.35 : 0.15);
    b.write_stroke(plans[k], progress);
    done += plans[k].duration;
  }
  Point end = b.last();
  b.write_air(end, {end.x + 0.4 * kUnit, end.y + 0.6 * kUnit}, 0.25);
  rec.samples = b.take();
  return rec;
}

std::string subject_name(bool pd, int index) {
  std::string num = std::to_string(index + 1);
  while (num.size() < 3) num.insert(num.begin(), '0');
  return (pd ? "PD" : "HC") + num;
}

}  // namespace

std::vector<PenRecording> synthesize_cohort(int n_pd, int n_control,
                                            std::uint64_t seed) {
  if (n_pd < 1 || n_control < 1)
    throw std::invalid_argument("cohort needs at least one subject per class");
  std::vector<PenRecording> out;
  out.reserve(static_cast<std::size_t>(n_pd + n_control) * 7);
  auto add_group = [&](bool pd, int count) {
    for (int i = 0; i < count; ++i) {
      std::seed_seq subject_seed{static_cast<std::uint32_t>(seed),
                                 static_cast<std::uint32_t>(seed >> 32),
                                 static_cast<std::uint32_t>(pd ? 1 : 0),
                                 static_cast<std::uint32_t>(i)};
      Rng subject_rng(subject_seed);
      Profile profile = draw_profile(subject_rng, pd);
      for (int task = 1; task <= 7; ++task) {
        std::seed_seq task_seed{static_cast<std::uint32_t>(seed),
                                static_cast<std::uint32_t>(seed >> 32),
                                static_cast<std::uint32_t>(pd ? 1 : 0),
                                static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(task)};
        Rng task_rng(task_seed);
        out.push_back(
            synthesize_recording(profile, subject_name(pd, i), task, task_rng));
      }
    }
  };
  add_group(true, n_pd);
  add_group(false, n_control);
  return out;
}

}  // namespace hwpd::ingest

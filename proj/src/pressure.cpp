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

#include "hwpd/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hwpd/kinematics.hpp"

namespace hwpd::pressure {

using ingest::ModalityView;
using ingest::Span;

double median(std::span<const double> values) {
  if (values.empty()) return std::nan("");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TimeSeriesFeature pressure_rate(const ModalityView& view) {
  std::vector<double> rate, t;
  for (const Span& s : view.strokes) {
    std::span<const double> ps(view.p.data() + s.begin, s.size());
    std::span<const double> ts(view.time.data() + s.begin, s.size());
    auto d = kinematics::derivative(ps, ts);
    auto m = kinematics::midpoints(ts);
    rate.insert(rate.end(), d.begin(), d.end());
    t.insert(t.end(), m.begin(), m.end());
  }
  return make_series("rate", std::move(rate), std::move(t));
}

std::vector<ScalarFeature> ncp(const ModalityView& view,
                               double writing_length) {
  std::vector<ScalarFeature> out = {{"ncp", std::nullopt},
                                    {"ncp_rel", std::nullopt}};
  std::size_t n = 0, count = 0;
  for (const Span& s : view.strokes) {
    std::span<const double> ps(view.p.data() + s.begin, s.size());
    std::span<const double> ts(view.time.data() + s.begin, s.size());
    auto d = kinematics::derivative(ps, ts);
    n += d.size();
    count += kinematics::count_local_extrema(d);
  }
  if (n < 3) return out;
  out[0].value = static_cast<double>(count);
  if (writing_length > 0.0)
    out[1].value = static_cast<double>(count) / writing_length;
  return out;
}

std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b) {
  std::size_t n = std::min(a.size(), b.size());
  if (n < 3) return std::nullopt;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

std::vector<ScalarFeature> pressure_correlations(
    const ingest::PenRecording& rec) {
  ModalityView on = ingest::project_modality(rec, ingest::Modality::kOnSurface);
  ModalityView pv = ingest::project_modality(rec, ingest::Modality::kPressure);
  std::vector<double> p1, p2, v, vx, vy, a, ax, ay;
  for (std::size_t k = 0; k < on.strokes.size(); ++k) {
    const Span s = on.strokes[k];
    std::span<const double> t(on.time.data() + s.begin, s.size());
    std::span<const double> x(on.x.data() + s.begin, s.size());
    std::span<const double> y(on.y.data() + s.begin, s.size());
    std::span<const double> p(pv.p.data() + s.begin, s.size());
    auto dvx = kinematics::derivative(x, t);
    auto dvy = kinematics::derivative(y, t);
    auto tm = kinematics::midpoints(t);
    auto dax = kinematics::derivative(dvx, tm);
    auto day = kinematics::derivative(dvy, tm);
    for (std::size_t i = 0; i < dvx.size(); ++i) {
      p1.push_back(p[i]);
      vx.push_back(dvx[i]);
      vy.push_back(dvy[i]);
      v.push_back(std::hypot(dvx[i], dvy[i]));
    }
    for (std::size_t i = 0; i < dax.size(); ++i) {
      p2.push_back(p[i]);
      ax.push_back(dax[i]);
      ay.push_back(day[i]);
      a.push_back(std::hypot(dax[i], day[i]));
    }
  }
  return {{"corr_velocity", pearson(p1, v)},
          {"corr_vx", pearson(p1, vx)},
          {"corr_vy", pearson(p1, vy)},
          {"corr_acceleration", pearson(p2, a)},
          {"corr_ax", pearson(p2, ax)},
          {"corr_ay", pearson(p2, ay)}};
}

PressureStrokeParts split_pressure_stroke(std::span<const double> p) {
  PressureStrokeParts parts;
  const std::size_t n = p.size();
  parts.threshold = median(p);
  if (n < 3) {
    parts.main = {0, n};
    parts.rising = {0, 0};
    parts.falling = {n, n};
    return parts;
  }
  const double m = parts.threshold;
  std::size_t first = 0;
  while (first < n && !(p[first] >= m)) ++first;
  std::size_t last = n - 1;
  while (last > first && !(p[last] >= m)) --last;
  // At least half the samples reach the median, so first < last for n >= 3.
  parts.rising = {0, first + 1};
  parts.falling = {last, n};
  parts.main = {first + 1, last};
  return parts;
}

namespace {

struct PartStats {
  std::optional<double> mean, stdev, duration, rate;
};

PartStats part_stats(Span s, std::span<const double> p,
                     std::span<const double> t) {
  PartStats out;
  if (s.size() == 0) return out;
  double sum = 0.0;
  for (std::size_t i = s.begin; i < s.end; ++i) sum += p[i];
  double mean = sum / static_cast<double>(s.size());
  double ss = 0.0;
  for (std::size_t i = s.begin; i < s.end; ++i)
    ss += (p[i] - mean) * (p[i] - mean);
  out.mean = mean;
  out.stdev = std::sqrt(ss / static_cast<double>(s.size()));
  out.duration = t[s.end - 1] - t[s.begin];
  if (s.size() >= 2) {
    auto d = kinematics::derivative(p.subspan(s.begin, s.size()),
                                    t.subspan(s.begin, s.size()));
    out.rate = std::accumulate(d.begin(), d.end(), 0.0) /
               static_cast<double>(d.size());
  }
  return out;
}

}  // namespace

std::vector<ScalarFeature> edge_features(const PressureStrokeParts& parts,
                                         std::span<const double> p,
                                         std::span<const double> time) {
  std::vector<ScalarFeature> out;
  const std::pair<const char*, Span> named[] = {
      {"rising", parts.rising}, {"main", parts.main}, {"falling", parts.falling}};
  for (const auto& [name, span] : named) {
    PartStats st = part_stats(span, p, time);
    std::string prefix = std::string(name) + ".";
    out.push_back({prefix + "mean", st.mean});
    out.push_back({prefix + "std", st.stdev});
    out.push_back({prefix + "duration", st.duration});
    out.push_back({prefix + "rate", st.rate});
  }
  auto range = [&](Span s, std::span<const double> v) -> std::optional<double> {
    if (s.size() == 0) return std::nullopt;
    return v[s.end - 1] - v[s.begin];
  };
  out.push_back({"rising.pressure_range", range(parts.rising, p)});
  out.push_back({"rising.time_range", range(parts.rising, time)});
  out.push_back({"falling.pressure_range", range(parts.falling, p)});
  out.push_back({"falling.time_range", range(parts.falling, time)});
  return out;
}

std::vector<TimeSeriesFeature> stroke_edge_features(const ModalityView& view) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values, times;
  {
    PressureStrokeParts empty;
    for (const auto& f : edge_features(empty, {}, {})) names.push_back(f.name);
    values.resize(names.size());
    times.resize(names.size());
  }
  for (const Span& s : view.strokes) {
    std::span<const double> ps(view.p.data() + s.begin, s.size());
    std::span<const double> ts(view.time.data() + s.begin, s.size());
    auto feats = edge_features(split_pressure_stroke(ps), ps, ts);
    for (std::size_t k = 0; k < feats.size(); ++k) {
      if (!feats[k].value) continue;
      values[k].push_back(*feats[k].value);
      times[k].push_back(ts.front());
    }
  }
  std::vector<TimeSeriesFeature> out;
  for (std::size_t k = 0; k < names.size(); ++k)
    out.push_back(make_series(names[k], std::move(values[k]),
                              std::move(times[k])));
  return out;
}

}  // namespace hwpd::pressure

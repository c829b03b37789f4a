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

#include "hwpd/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwpd::kinematics {

using ingest::ModalityView;
using ingest::PenRecording;
using ingest::StrokeKind;

std::vector<double> derivative(std::span<const double> series,
                               std::span<const double> time) {
  if (series.size() != time.size())
    throw std::invalid_argument("derivative: series and time differ in length");
  if (series.size() < 2) return {};
  std::vector<double> out(series.size() - 1);
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    double dt = time[i + 1] - time[i];
    if (!(dt > 0.0))
      throw std::invalid_argument("derivative: time must strictly increase");
    out[i] = (series[i + 1] - series[i]) / dt;
  }
  return out;
}

std::vector<double> midpoints(std::span<const double> time) {
  if (time.size() < 2) return {};
  std::vector<double> out(time.size() - 1);
  for (std::size_t i = 0; i + 1 < time.size(); ++i)
    out[i] = 0.5 * (time[i] + time[i + 1]);
  return out;
}

std::size_t count_local_extrema(std::span<const double> values) {
  // Collapse constant runs, then count interior sign changes of the slope.
  std::vector<double> runs;
  runs.reserve(values.size());
  for (double v : values)
    if (runs.empty() || v != runs.back()) runs.push_back(v);
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
    bool peak = runs[i] > runs[i - 1] && runs[i] > runs[i + 1];
    bool trough = runs[i] < runs[i - 1] && runs[i] < runs[i + 1];
    if (peak || trough) ++count;
  }
  return count;
}

namespace {

struct StrokeDerivatives {
  std::vector<double> vx, vy, v, tv;
  std::vector<double> ax, ay, a, ta;
  std::vector<double> jx, jy, j, tj;
};

std::vector<double> magnitude(const std::vector<double>& a,
                              const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::hypot(a[i], b[i]);
  return out;
}

StrokeDerivatives stroke_derivatives(const ModalityView& view,
                                     ingest::Span s) {
  StrokeDerivatives d;
  std::span<const double> t(view.time.data() + s.begin, s.size());
  std::span<const double> x(view.x.data() + s.begin, s.size());
  std::span<const double> y(view.y.data() + s.begin, s.size());
  d.vx = derivative(x, t);
  d.vy = derivative(y, t);
  d.tv = midpoints(t);
  d.v = magnitude(d.vx, d.vy);
  d.ax = derivative(d.vx, d.tv);
  d.ay = derivative(d.vy, d.tv);
  d.ta = midpoints(d.tv);
  d.a = magnitude(d.ax, d.ay);
  d.jx = derivative(d.ax, d.ta);
  d.jy = derivative(d.ay, d.ta);
  d.tj = midpoints(d.ta);
  d.j = magnitude(d.jx, d.jy);
  return d;
}

void append(std::vector<double>& dst, const std::vector<double>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

std::vector<TimeSeriesFeature> velocity_features(const ModalityView& view) {
  static const char* kNames[] = {"velocity", "vx",   "vy", "acceleration",
                                 "ax",       "ay",   "jerk", "jx", "jy"};
  std::vector<std::vector<double>> values(9), times(9);
  if (view.size() >= 3 && !view.x.empty()) {
    for (const auto& span : view.strokes) {
      StrokeDerivatives d = stroke_derivatives(view, span);
      const std::vector<double>* seq[] = {&d.v, &d.vx, &d.vy, &d.a, &d.ax,
                                          &d.ay, &d.j, &d.jx, &d.jy};
      const std::vector<double>* tax[] = {&d.tv, &d.tv, &d.tv, &d.ta, &d.ta,
                                          &d.ta, &d.tj, &d.tj, &d.tj};
      for (int k = 0; k < 9; ++k) {
        append(values[k], *seq[k]);
        append(times[k], *tax[k]);
      }
    }
  }
  std::vector<TimeSeriesFeature> out;
  out.reserve(9);
  for (int k = 0; k < 9; ++k)
    out.push_back(make_series(kNames[k], std::move(values[k]),
                              std::move(times[k])));
  return out;
}

std::vector<ScalarFeature> ncv_nca(const ModalityView& view) {
  std::vector<ScalarFeature> out = {{"ncv", std::nullopt},
                                    {"ncv_rel", std::nullopt},
                                    {"nca", std::nullopt},
                                    {"nca_rel", std::nullopt}};
  if (view.x.empty()) return out;
  std::size_t nv = 0, na = 0, ncv = 0, nca = 0;
  for (const auto& span : view.strokes) {
    StrokeDerivatives d = stroke_derivatives(view, span);
    nv += d.v.size();
    na += d.a.size();
    ncv += count_local_extrema(d.v);
    nca += count_local_extrema(d.a);
  }
  const double dur = view.task_duration;
  if (nv >= 3) {
    out[0].value = static_cast<double>(ncv);
    if (dur > 0.0) out[1].value = static_cast<double>(ncv) / dur;
  }
  if (na >= 3) {
    out[2].value = static_cast<double>(nca);
    if (dur > 0.0) out[3].value = static_cast<double>(nca) / dur;
  }
  return out;
}

double path_length(std::span<const double> x, std::span<const double> y) {
  double len = 0.0;
  for (std::size_t i = 1; i < x.size() && i < y.size(); ++i)
    len += std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  return len;
}

std::vector<TimeSeriesFeature> stroke_features(const ModalityView& view) {
  std::vector<double> height, width, duration, length, speed, start;
  std::vector<double> speed_t;
  if (!view.x.empty()) {
    for (const auto& s : view.strokes) {
      if (s.size() < 2) continue;
      auto xb = view.x.begin() + static_cast<std::ptrdiff_t>(s.begin);
      auto yb = view.y.begin() + static_cast<std::ptrdiff_t>(s.begin);
      auto n = static_cast<std::ptrdiff_t>(s.size());
      auto [xmin, xmax] = std::minmax_element(xb, xb + n);
      auto [ymin, ymax] = std::minmax_element(yb, yb + n);
      double dur = view.time[s.end - 1] - view.time[s.begin];
      double len = path_length({&*xb, s.size()}, {&*yb, s.size()});
      height.push_back(*ymax - *ymin);
      width.push_back(*xmax - *xmin);
      duration.push_back(dur);
      length.push_back(len);
      start.push_back(view.time[s.begin]);
      if (dur > 0.0) {
        speed.push_back(len / dur);
        speed_t.push_back(view.time[s.begin]);
      }
    }
  }
  std::vector<TimeSeriesFeature> out;
  out.push_back(make_series("stroke_height", std::move(height), start));
  out.push_back(make_series("stroke_width", std::move(width), start));
  out.push_back(make_series("stroke_duration", std::move(duration), start));
  out.push_back(make_series("stroke_length", std::move(length), start));
  out.push_back(make_series("stroke_speed", std::move(speed), speed_t));
  return out;
}

SpatioTemporal global_spatiotemporal(const PenRecording& rec) {
  SpatioTemporal st;
  for (const auto& seg : ingest::segment_strokes(rec)) {
    double len = 0.0;
    for (std::size_t i = seg.start_index + 1; i <= seg.end_index; ++i) {
      const auto& a = rec.samples[i - 1];
      const auto& b = rec.samples[i];
      len += std::hypot(static_cast<double>(b.x - a.x),
                        static_cast<double>(b.y - a.y));
    }
    if (seg.kind == StrokeKind::kOnSurface) {
      st.writing_duration += seg.duration;
      st.writing_length += len;
    } else {
      st.air_duration += seg.duration;
      st.air_length += len;
    }
  }
  if (st.writing_duration > 0.0) {
    st.writing_speed = st.writing_length / st.writing_duration;
    st.air_to_surface_ratio = st.air_duration / st.writing_duration;
  }
  if (st.air_duration > 0.0) st.air_speed = st.air_length / st.air_duration;
  return st;
}

std::vector<ScalarFeature> spatiotemporal_features(const SpatioTemporal& st,
                                                   ingest::Modality modality) {
  if (modality == ingest::Modality::kInAir) {
    std::optional<double> dur, len;
    dur = st.air_duration;
    len = st.air_length;
    return {{"air_duration", dur},
            {"air_length", len},
            {"air_speed", st.air_speed},
            {"air_to_surface_ratio", st.air_to_surface_ratio}};
  }
  return {{"writing_duration", st.writing_duration},
          {"writing_length", st.writing_length},
          {"writing_speed", st.writing_speed},
          {"air_to_surface_ratio", st.air_to_surface_ratio}};
}

}  // namespace hwpd::kinematics

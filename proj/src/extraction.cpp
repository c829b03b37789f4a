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

#include <cmath>
#include <string>

#include "hwpd/emd.hpp"
#include "hwpd/featurize.hpp"
#include "hwpd/kinematics.hpp"
#include "hwpd/nonlinear.hpp"
#include "hwpd/pressure.hpp"

namespace hwpd::featurize {

using ingest::Modality;

namespace {

void add_scalars(std::vector<ScalarFeature>& out, std::string_view prefix,
                 std::vector<ScalarFeature> feats) {
  for (auto& f : feats) {
    f.name = std::string(prefix) + f.name;
    if (f.value && !std::isfinite(*f.value)) f.value.reset();
    out.push_back(std::move(f));
  }
}

void add_series(std::vector<ScalarFeature>& out, std::string_view prefix,
                const std::vector<TimeSeriesFeature>& series) {
  for (const auto& s : series)
    add_scalars(out, prefix, apply_functionals(s.name, s.values));
}

void add_channel(std::vector<ScalarFeature>& out, std::string_view channel,
                 const std::vector<double>& signal,
                 const ExtractionOptions& options) {
  add_scalars(out, "nl.", nonlinear::channel_features(channel, signal));
  emd::Decomposition d = emd::sift(signal);
  if (options.on_decomposition) options.on_decomposition(channel, d);
  add_scalars(out, "emd.",
              emd::intrinsic_features(channel, d,
                                      options.emd_snr_includes_residual));
}

}  // namespace

std::vector<ScalarFeature> extract_features(const ingest::PenRecording& rec,
                                            Modality modality,
                                            const ExtractionOptions& options) {
  std::vector<ScalarFeature> out;
  const ingest::ModalityView view = ingest::project_modality(rec, modality);
  const kinematics::SpatioTemporal st = kinematics::global_spatiotemporal(rec);

  if (modality == Modality::kPressure) {
    const std::string prefix = "prs.";
    add_series(out, prefix, {pressure::pressure_rate(view)});
    add_scalars(out, prefix, pressure::ncp(view, st.writing_length));
    add_scalars(out, prefix, pressure::pressure_correlations(rec));
    add_series(out, prefix, pressure::stroke_edge_features(view));
    add_channel(out, "p", view.p, options);
    return out;
  }

  const std::string prefix =
      "kin." + std::string(ingest::modality_name(modality)) + ".";
  auto kin = kinematics::velocity_features(view);
  add_series(out, prefix, kin);
  add_scalars(out, prefix, kinematics::ncv_nca(view));
  add_series(out, prefix, kinematics::stroke_features(view));
  add_scalars(out, prefix, kinematics::spatiotemporal_features(st, modality));
  add_channel(out, "x", view.x, options);
  add_channel(out, "y", view.y, options);
  add_channel(out, "v", kin.front().values, options);
  return out;
}

}  // namespace hwpd::featurize

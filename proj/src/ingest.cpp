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

#include "hwpd/ingest.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hwpd::ingest {

namespace {

bool parse_int(std::string_view token, std::int64_t* out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

double PenRecording::duration_seconds() const {
  if (samples.size() < 2) return 0.0;
  return static_cast<double>(samples.back().t_ms - samples.front().t_ms) /
         1000.0;
}

std::string_view modality_name(Modality m) {
  switch (m) {
    case Modality::kOnSurface: return "on-surface";
    case Modality::kInAir: return "in-air";
    case Modality::kPressure: return "pressure";
  }
  return "?";
}

Modality parse_modality(std::string_view name) {
  for (Modality m : kAllModalities)
    if (modality_name(m) == name) return m;
  throw DataError("unknown modality '" + std::string(name) + "'");
}

std::string label_token(Label label) {
  switch (label) {
    case Label::kPD: return "PD";
    case Label::kControl: return "H";
    case Label::kUnlabeled: return "?";
  }
  return "?";
}

Label parse_label(std::string_view token) {
  if (token == "PD" || token == "1") return Label::kPD;
  if (token == "H" || token == "0") return Label::kControl;
  throw DataError("unknown label '" + std::string(token) + "'");
}

void validate(const PenRecording& rec) {
  if (rec.task_id < 1 || rec.task_id > 7)
    throw DataError("task id " + std::to_string(rec.task_id) +
                    " outside [1, 7]");
  std::size_t on = 0;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const PenSample& s = rec.samples[i];
    if (s.pen_state != 0 && s.pen_state != 1)
      throw DataError("sample " + std::to_string(i) + ": pen state not 0/1");
    if (s.pen_state == 0 && s.pressure != 0)
      throw DataError("sample " + std::to_string(i) +
                      ": nonzero pressure while in air");
    if (s.pressure < 0 || s.pressure > kMaxPressure)
      throw DataError("sample " + std::to_string(i) +
                      ": pressure out of range");
    if (i > 0 && s.t_ms <= rec.samples[i - 1].t_ms)
      throw DataError("sample " + std::to_string(i) +
                      ": timestamps not strictly increasing");
    on += s.on_surface() ? 1 : 0;
  }
  if (on < 2)
    throw DataError("recording " + rec.subject_id + "/" +
                    std::to_string(rec.task_id) +
                    " has fewer than 2 on-surface samples");
}

PenRecording parse_recording(std::istream& in, std::string subject_id,
                             int task_id, const WarningSink& warn) {
  PenRecording rec;
  rec.subject_id = std::move(subject_id);
  rec.task_id = task_id;

  std::string line;
  std::size_t line_no = 0;
  std::int64_t declared = -1;
  std::vector<PenSample> raw;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (declared < 0) {
      if (fields.size() != 1 || !parse_int(fields[0], &declared) ||
          declared < 0)
        fail_at(line_no, "expected a sample count header");
      continue;
    }
    if (fields.size() != 7) fail_at(line_no, "expected 7 fields");
    std::int64_t v[7];
    for (int k = 0; k < 7; ++k)
      if (!parse_int(fields[k], &v[k]))
        fail_at(line_no, "field " + std::to_string(k + 1) +
                             " is not an integer");
    PenSample s;
    s.x = static_cast<int>(v[0]);
    s.y = static_cast<int>(v[1]);
    s.t_ms = v[2];
    s.pen_state = static_cast<int>(v[3]);
    s.azimuth = static_cast<int>(v[4]);
    s.altitude = static_cast<int>(v[5]);
    s.pressure = static_cast<int>(v[6]);
    if (s.t_ms < 0) fail_at(line_no, "negative timestamp");
    if (s.pen_state != 0 && s.pen_state != 1)
      fail_at(line_no, "pen state must be 0 or 1");
    if (s.pressure < 0 || s.pressure > kMaxPressure)
      fail_at(line_no, "pressure outside [0, " +
                           std::to_string(kMaxPressure) + "]");
    if (!raw.empty() && s.t_ms < raw.back().t_ms)
      fail_at(line_no, "timestamp decreases");
    if (s.pen_state == 0 && s.pressure > 0) {
      warn("line " + std::to_string(line_no) + ": pressure " +
           std::to_string(s.pressure) + " while in air, clamped to 0");
      s.pressure = 0;
    }
    raw.push_back(s);
  }
  if (declared < 0) throw DataError("empty recording file");
  if (static_cast<std::int64_t>(raw.size()) != declared)
    throw DataError("header declares " + std::to_string(declared) +
                    " samples but " + std::to_string(raw.size()) +
                    " were found");

  // Equal consecutive timestamps collapse to the last sample.
  rec.samples.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i + 1 < raw.size() && raw[i + 1].t_ms == raw[i].t_ms) continue;
    rec.samples.push_back(raw[i]);
  }
  validate(rec);
  return rec;
}

PenRecording parse_recording(const std::filesystem::path& path,
                             const WarningSink& warn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string subject = path.stem().string();
  int task = 1;
  auto sep = subject.rfind("__");
  if (sep != std::string::npos) {
    std::int64_t t = 0;
    if (parse_int(std::string_view(subject).substr(sep + 2), &t)) {
      task = static_cast<int>(t);
      subject.resize(sep);
    }
  }
  try {
    return parse_recording(in, subject, task, warn);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_recording(const PenRecording& rec, std::ostream& out) {
  out << rec.samples.size() << '\n';
  for (const PenSample& s : rec.samples)
    out << s.x << ' ' << s.y << ' ' << s.t_ms << ' ' << s.pen_state << ' '
        << s.azimuth << ' ' << s.altitude << ' ' << s.pressure << '\n';
}

void write_recording(const PenRecording& rec,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_recording(rec, out);
}

std::string recording_filename(std::string_view subject_id, int task_id) {
  return std::string(subject_id) + "__" + std::to_string(task_id) + ".svc";
}

std::vector<StrokeSegment> segment_strokes(const PenRecording& rec) {
  std::vector<StrokeSegment> out;
  const auto& s = rec.samples;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1].pen_state == s[i].pen_state) ++j;
    StrokeSegment seg;
    seg.kind = s[i].on_surface() ? StrokeKind::kOnSurface : StrokeKind::kInAir;
    seg.start_index = i;
    seg.end_index = j;
    seg.duration = static_cast<double>(s[j].t_ms - s[i].t_ms) / 1000.0;
    out.push_back(seg);
    i = j + 1;
  }
  return out;
}

ModalityView project_modality(const PenRecording& rec, Modality modality) {
  ModalityView view;
  view.modality = modality;
  view.task_duration = rec.duration_seconds();
  const StrokeKind wanted = modality == Modality::kInAir
                                ? StrokeKind::kInAir
                                : StrokeKind::kOnSurface;
  const bool movement = modality != Modality::kPressure;
  // Seconds since the first sample of the recording.
  const std::int64_t t0 = rec.samples.empty() ? 0 : rec.samples.front().t_ms;
  for (const StrokeSegment& seg : segment_strokes(rec)) {
    if (seg.kind != wanted) continue;
    Span span;
    span.begin = view.time.size();
    for (std::size_t i = seg.start_index; i <= seg.end_index; ++i) {
      const PenSample& s = rec.samples[i];
      view.time.push_back(static_cast<double>(s.t_ms - t0) / 1000.0);
      if (movement) {
        view.x.push_back(static_cast<double>(s.x));
        view.y.push_back(static_cast<double>(s.y));
      } else {
        view.p.push_back(static_cast<double>(s.pressure) / kMaxPressure);
      }
      view.source_index.push_back(i);
    }
    span.end = view.time.size();
    view.strokes.push_back(span);
    view.source_strokes.push_back(seg);
  }
  return view;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto comma = t.find(',');
    if (comma == std::string::npos)
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": expected subject_id,label");
    std::string id = trim(std::string_view(t).substr(0, comma));
    std::string lab = trim(std::string_view(t).substr(comma + 1));
    if (!header_seen) {
      header_seen = true;
      if (id == "subject_id") continue;
    }
    try {
      out.push_back({id, parse_label(lab)});
    } catch (const DataError& e) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": " + e.what());
    }
  }
  return out;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    std::ostream& out) {
  out << "subject_id,label\n";
  for (const auto& e : entries)
    out << e.subject_id << ',' << label_token(e.label) << '\n';
}

}  // namespace hwpd::ingest

#include "sparkle/bench/judge.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "sparkle/error.hpp"

namespace sparkle::bench {

namespace {

constexpr const char* kSparkle6Head = R"PROMPT(You are a data rater specializing in grading video background replacement. You will be given two videos (source and edited) and the editing instruction. Your task is to evaluate the result on a 5-point scale across six dimensions:

Instruction Compliance
1. No change, or background entirely unrelated to the prompt, or foreground also replaced/distorted such that the edit fails as a whole.
2. Background only partially matches prompt content or style; major requested elements wrong or missing; or foreground noticeably altered.
3. Main background concept matches but with missing/extra elements, wrong sub-style, or partial spill onto the subject.
4. Requested background fully present and consistent with the prompt; only minor mismatches in tone, detail, or atmosphere.
5. Background exactly matches the prompt in content, style, mood, and any specified dynamics; foreground untouched.

Overall Visual Quality. This dimension covers global image quality AND foreground-background harmonization. The lighting, color temperature, and shadows on the foreground must match the new background environment. For example, when the prompt changes the time of day (e.g. day to night, noon to sunset), keeping the original daytime lighting on the foreground while the background is dark is a major harmonization failure. The same applies to season, location, and style edits that imply different ambient light.
1. Severe artefacts throughout (tearing, posterisation, color banding, heavy flicker), OR foreground lighting is grossly inconsistent with the new background (e.g. brightly lit subject against a night scene, conflicting light directions, no shadow adaptation).
2. Clear visual degradation (persistent blur, noise, unstable colors), OR obvious lighting / color-temperature mismatch between foreground and background visible at first glance.
3. Watchable but with visible flaws on closer look: occasional flicker, mild compression artefacts, soft regions, OR partial harmonization where the foreground tone is in the right direction but not fully matched to the background.
4. Clean output with only minor issues when zoomed in or paused; foreground lighting and color grading are well aligned with the background, with only subtle discrepancies.
5. Indistinguishable from real captured footage: sharp, stable, well-graded across the entire clip, with foreground lighting, color temperature, and shadows fully harmonized with the new background environment.

Foreground Integrity
1. Foreground severely damaged: missing limbs/parts, large holes, replaced with a different subject, or shape collapsed.
2. Noticeable foreground damage: partial erosion by background, distorted contours, identity drift across frames.
3. Foreground mostly preserved but with visible defects: edge halos, slight shape deformation, occasional color bleed.
4. Foreground well preserved with only minute edge artefacts; shape and identity stable throughout.
5. Foreground perfectly preserved: every pixel of shape, texture, and identity intact across all frames.

Foreground Motion Consistency
1. Foreground motion completely different from source: actions replaced, frozen, looped, or temporally scrambled.
2. Major motion deviations: different gestures, dropped actions, or strong temporal jitter not present in source.
3. Same general action is recognizable but with timing drift, trajectory shifts, or inconsistent speed versus source.
4. Motion closely tracks the source with only minor temporal misalignment or subtle smoothing.
5. Foreground motion is identical to the source video in trajectory, timing, and articulation, frame by frame.

Background Dynamics (Liveness). This dimension measures whether the background motion matches the intensity and character implied by the prompt. The bar is appropriateness to the prompt, not absolute amount of motion. A "gentle swaying grass" prompt rendered as subtle wind-like sway is fully correct and should receive a high score; the same subtle motion for a "rushing waterfall" prompt is severely under-rendered.
1. Background motion contradicts the prompt: completely static when the prompt implies any motion, or wrong type/direction of motion (e.g. crashing waves rendered as a still pond).
2. Motion intensity is far below what the prompt implies (e.g. a "rushing river" rendered as barely moving water), or required dynamics are largely absent.
3. Motion type is in the right direction but noticeably under- or over-rendered, OR motion exists but feels stiff and unnatural.
4. Motion intensity and character are well matched to the prompt, with only minor stiffness, small frozen patches, or slight over/under rendering.
5. Background motion perfectly matches the prompt in both intensity and character, rendered naturally and continuously throughout the clip — gentle prompts receive gentle motion, energetic prompts receive energetic motion.
Special case: if the prompt explicitly asks for a static background (e.g. "still photo", "frozen scene", "no motion"), a faithfully static background scores 5 and any unwanted motion lowers the score accordingly.

Background Visual Quality
1. Background severely degraded: melting structures, broken geometry, heavy blur, or incoherent textures.
2. Clear distortion or blur in major background regions; structures wobble or warp over time.
3. Acceptable background with visible imperfections: soft textures, mild geometric inconsistency, minor temporal warping.
4. High-quality background with only minor issues on close inspection; geometry and textures stable.
5. Background is sharp, geometrically coherent, and temporally stable; on par with real footage.

Constraints. The scores for Overall Visual Quality, Foreground Integrity, Foreground Motion Consistency, Background Dynamics, and Background Visual Quality must not exceed the score for Instruction Compliance.

Example Response Format.
– Brief reasoning: No more than 30 words.
– Instruction Compliance: 1–5.
– Overall Visual Quality: 1–5.
– Foreground Integrity: 1–5.
– Foreground Motion Consistency: 1–5.
– Background Dynamics: 1–5.
– Background Visual Quality: 1–5.

Editing instruction is: )PROMPT";

constexpr const char* kSparkle6Tail = R"PROMPT(.

Below are the videos before and after editing:)PROMPT";

constexpr const char* kOpenVe3Head = R"PROMPT(You are a data rater specializing in grading video background replacement. You will be given two videos (source and edited) and the editing instruction. Your task is to evaluate the result on a 5-point scale across three dimensions:

Instruction Compliance
1. No change, or the new background is unrelated to the instruction.
2. The background only partially follows the instruction; major requested elements are wrong or missing.
3. The main background concept matches, with missing or extra elements.
4. The requested background is fully present with only minor mismatches in tone or detail.
5. The background exactly matches the instruction and the foreground is untouched.

Consistency & Detail Fidelity
1. The foreground is replaced, destroyed, or unrecognizable.
2. Noticeable foreground damage or identity drift across frames.
3. The foreground is mostly preserved with visible defects such as halos or color bleed.
4. The foreground is well preserved with only minute edge artefacts.
5. Every detail of the foreground is preserved across all frames.

Visual Quality & Stability
1. Severe artefacts or heavy flicker throughout.
2. Clear degradation such as persistent blur, noise, or unstable colors.
3. Watchable with visible flaws on closer look.
4. Clean and stable with only minor issues when paused.
5. Indistinguishable from real captured footage.

Constraints. The scores for Consistency & Detail Fidelity and Visual Quality & Stability must not exceed the score for Instruction Compliance.

Example Response Format.
– Brief reasoning: No more than 30 words.
– Instruction Compliance: 1–5.
– Consistency & Detail Fidelity: 1–5.
– Visual Quality & Stability: 1–5.

Editing instruction is: )PROMPT";

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Drops list bullets, markdown emphasis, and surrounding whitespace.
std::string strip_decoration(const std::string& line) {
  std::string s;
  for (char c : line) {
    if (c != '*' && c != '#' && c != '`') s += c;
  }
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '-') {
      ++i;
    } else if (s.compare(i, 3, "–") == 0 || s.compare(i, 3, "•") == 0) {
      i += 3;
    } else {
      break;
    }
  }
  std::size_t end = s.size();
  while (end > i && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(i, end - i);
}

// Value after "<name>[ (qualifier)]:" when the line starts with the name.
std::optional<std::string> field_value(const std::string& line, const std::string& name) {
  const std::string l = lower(line);
  const std::string n = lower(name);
  if (l.compare(0, n.size(), n) != 0) return std::nullopt;
  std::size_t i = n.size();
  while (i < l.size() && l[i] == ' ') ++i;
  if (i < l.size() && l[i] == '(') {
    auto close = l.find(')', i);
    if (close == std::string::npos) return std::nullopt;
    i = close + 1;
    while (i < l.size() && l[i] == ' ') ++i;
  }
  if (i >= l.size() || l[i] != ':') return std::nullopt;
  std::size_t start = line.find_first_not_of(' ', i + 1);
  return start == std::string::npos ? std::string{} : line.substr(start);
}

}  // namespace

std::string build_judge_prompt(const Protocol& protocol, const std::string& instruction) {
  if (instruction.empty()) throw ValidationError("judge prompt needs a non-empty instruction");
  if (protocol.name == "sparkle6") return kSparkle6Head + instruction + kSparkle6Tail;
  if (protocol.name == "openve3") return kOpenVe3Head + instruction + kSparkle6Tail;
  throw ValidationError("no judge prompt for protocol '" + protocol.name + "'");
}

DimScores parse_judge_response(const std::string& text, const Protocol& protocol) {
  std::vector<std::optional<int>> found(protocol.size());
  DimScores out;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = strip_decoration(raw);
    if (auto v = field_value(line, "Brief reasoning")) {
      out.reasoning = *v;
      continue;
    }
    for (std::size_t d = 0; d < protocol.size(); ++d) {
      const auto& name = protocol.dimensions[d].name;
      auto v = field_value(line, name);
      if (!v) continue;
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(*v, &used);
      } catch (const std::exception&) {
        throw ValidationError("non-integer score for " + name + ": '" + *v + "'");
      }
      if (value < 1 || value > 5) {
        throw ValidationError("score out of range for " + name + ": " + std::to_string(value));
      }
      if (found[d] && *found[d] != value) throw ValidationError("conflicting duplicate scores for " + name);
      found[d] = value;
      break;
    }
  }
  for (std::size_t d = 0; d < protocol.size(); ++d) {
    if (!found[d]) throw ValidationError("missing dimension: " + protocol.dimensions[d].name);
    out.values.push_back(*found[d]);
  }
  return out;
}

DimScores enforce_caps(DimScores scores, const Protocol& protocol) {
  if (scores.values.size() != protocol.size()) throw ValidationError("score count does not match protocol");
  const int anchor = scores.values[protocol.cap_anchor];
  for (std::size_t d = 0; d < scores.values.size(); ++d) {
    if (d != protocol.cap_anchor) scores.values[d] = std::min(scores.values[d], anchor);
  }
  return scores;
}

}  // namespace sparkle::bench

#include "symdyn/specio.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace symdyn {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::kSchema, where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      fail(ErrorKind::kSchema, where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(ErrorKind::kSchema, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    fail(ErrorKind::kSchema, where + ": bad value for '" + key + "'");
  }
}

template <typename T>
T field_or(const Json& j, const std::string& key, T def) {
  if (!j.contains(key)) return def;
  return j.at(key).get<T>();
}

}  // namespace

std::string double_to_text(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

double double_from_text(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

RunConfig parse_run_config(const Json& j) {
  reject_unknown(j, {"seed", "m", "n_max", "lambda_tol", "out"}, "config");
  RunConfig c;
  c.seed = field_or<std::uint64_t>(j, "seed", 1);
  if (j.contains("m")) c.m_list = j.at("m").get<std::vector<long long>>();
  c.n_max = field_or<long long>(j, "n_max", 24);
  c.lambda_tol = field_or<double>(j, "lambda_tol", 1e-6);
  c.out = field_or<std::string>(j, "out", "");
  return c;
}

Json run_config_json(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["m"] = c.m_list;
  j["n_max"] = c.n_max;
  j["lambda_tol"] = c.lambda_tol;
  // The output path is part of the invocation, not of the run; leaving it
  // out keeps artifacts byte-identical across destinations.
  return j;
}

SystemSpec parse_system(const Json& j) {
  std::string kind = field<std::string>(j, "kind", "system");
  SystemSpec out;
  if (kind == "fan") {
    reject_unknown(j, {"kind"}, "system");
    out.is_fan = true;
    return out;
  }
  if (kind != "subshift") fail(ErrorKind::kSchema, "system: kind must be subshift or fan");
  reject_unknown(j, {"kind", "alphabet", "forbidden", "one_sided"}, "system");
  int k = static_cast<int>(field<long long>(j, "alphabet", "system"));
  std::vector<Word> forbidden;
  if (j.contains("forbidden")) {
    for (const auto& f : j.at("forbidden")) {
      Word w = word_from_string(f.get<std::string>());
      for (Sym s : w) {
        if (static_cast<int>(s) >= k)
          fail(ErrorKind::kSchema, "system: forbidden word has a symbol outside the alphabet");
      }
      forbidden.push_back(std::move(w));
    }
  }
  bool one_sided = field_or<bool>(j, "one_sided", false);
  out.shift = Subshift::forbid(k, std::move(forbidden), one_sided);
  return out;
}

Json system_json(const Subshift& s) {
  Json j;
  j["kind"] = "subshift";
  j["alphabet"] = s.alphabet_size();
  Json f = Json::array();
  for (const auto& w : s.forbidden()) f.push_back(word_to_string(w));
  j["forbidden"] = f;
  if (s.one_sided()) j["one_sided"] = true;
  return j;
}

Json system_json(const SystemSpec& s) {
  if (s.is_fan) {
    Json j;
    j["kind"] = "fan";
    return j;
  }
  return system_json(s.shift);
}

namespace {

Stage parse_stage(const Json& j) {
  std::string kind = field<std::string>(j, "kind", "stage");
  if (kind == "lex") {
    reject_unknown(j, {"kind", "length", "payload_lo", "payload_len", "count"}, "stage");
    LexStage st;
    st.length = field<long long>(j, "length", "stage");
    st.payload_lo = field<long long>(j, "payload_lo", "stage");
    st.payload_len = field<long long>(j, "payload_len", "stage");
    st.count = BigUInt::from_decimal(field<std::string>(j, "count", "stage"));
    return st;
  }
  if (kind != "explicit") fail(ErrorKind::kSchema, "stage: kind must be lex or explicit");
  reject_unknown(j, {"kind", "length", "points"}, "stage");
  ExplicitStage st;
  st.length = field<long long>(j, "length", "stage");
  for (const auto& p : j.at("points"))
    st.points.push_back(BiInfinitePoint::parse(p.get<std::string>()));
  return st;
}

Json stage_json(const Stage& st) {
  Json j;
  if (const auto* lex = std::get_if<LexStage>(&st)) {
    j["kind"] = "lex";
    j["length"] = lex->length;
    j["payload_lo"] = lex->payload_lo;
    j["payload_len"] = lex->payload_len;
    j["count"] = lex->count.to_decimal();
    return j;
  }
  const auto& ex = std::get<ExplicitStage>(st);
  j["kind"] = "explicit";
  j["length"] = ex.length;
  Json pts = Json::array();
  for (const auto& p : ex.points) pts.push_back(p.to_literal());
  j["points"] = pts;
  return j;
}

}  // namespace

CompactSetPtr parse_set(const Json& j) {
  std::string kind = field<std::string>(j, "kind", "set");
  if (kind == "finite") {
    reject_unknown(j, {"kind", "system", "points"}, "set");
    FinitePointSet fs;
    fs.ambient = parse_system(j.at("system")).shift;
    for (const auto& p : j.at("points")) {
      BiInfinitePoint pt = BiInfinitePoint::parse(p.get<std::string>());
      if (!fs.ambient.point_admissible(pt))
        fail(ErrorKind::kSchema, "set: point not admissible: " + p.get<std::string>());
      fs.points.push_back(std::move(pt));
    }
    std::sort(fs.points.begin(), fs.points.end());
    fs.points.erase(std::unique(fs.points.begin(), fs.points.end()), fs.points.end());
    return CompactSet::make(std::move(fs));
  }
  if (kind == "tree") {
    reject_unknown(j, {"kind", "system", "base", "depth", "words", "language"}, "set");
    CylinderTree t;
    t.ambient = parse_system(j.at("system")).shift;
    t.base = field_or<long long>(j, "base", 0);
    t.depth = field<long long>(j, "depth", "set");
    if (field_or<bool>(j, "language", false)) {
      t.language_backed = true;
      t.language = t.ambient;
    } else {
      for (const auto& w : j.at("words")) {
        Word word = word_from_string(w.get<std::string>());
        if (static_cast<long long>(word.size()) != t.depth)
          fail(ErrorKind::kSchema, "set: tree word length differs from depth");
        if (!t.ambient.word_admissible(word))
          fail(ErrorKind::kSchema, "set: tree word not admissible");
        t.words.push_back(std::move(word));
      }
      std::sort(t.words.begin(), t.words.end());
      t.words.erase(std::unique(t.words.begin(), t.words.end()), t.words.end());
    }
    return CompactSet::make(std::move(t));
  }
  if (kind == "staged") {
    reject_unknown(j, {"kind", "system", "x0", "resolution", "stages"}, "set");
    StagedFamily f;
    f.ambient = parse_system(j.at("system")).shift;
    f.x0 = BiInfinitePoint::parse(field<std::string>(j, "x0", "set"));
    f.resolution = field<long long>(j, "resolution", "set");
    for (const auto& st : j.at("stages")) f.stages.push_back(parse_stage(st));
    return CompactSet::make(std::move(f));
  }
  if (kind == "whole") {
    reject_unknown(j, {"kind", "system"}, "set");
    return CompactSet::make(WholeSpace{parse_system(j.at("system")).shift});
  }
  if (kind == "fan") {
    reject_unknown(j, {"kind", "apex", "full_tail_from", "balls"}, "set");
    FanSet fan;
    fan.apex = field_or<bool>(j, "apex", true);
    if (j.contains("full_tail_from")) fan.full_tail_from = j.at("full_tail_from").get<long long>();
    if (j.contains("balls")) {
      for (const auto& [key, value] : j.at("balls").items()) {
        fan.balls[std::stoll(key)] = parse_set(value);
      }
    }
    return CompactSet::make(std::move(fan));
  }
  fail(ErrorKind::kSchema, "set: unknown kind '" + kind + "'");
}

Json set_json(const CompactSet& K) {
  Json j;
  if (const auto* fs = K.get<FinitePointSet>()) {
    j["kind"] = "finite";
    j["system"] = system_json(fs->ambient);
    Json pts = Json::array();
    for (const auto& p : fs->points) pts.push_back(p.to_literal());
    j["points"] = pts;
    return j;
  }
  if (const auto* t = K.get<CylinderTree>()) {
    j["kind"] = "tree";
    j["system"] = system_json(t->ambient);
    j["base"] = t->base;
    j["depth"] = t->depth;
    if (t->language_backed) {
      j["language"] = true;
    } else {
      Json words = Json::array();
      for (const auto& w : t->words) words.push_back(word_to_string(w));
      j["words"] = words;
    }
    return j;
  }
  if (const auto* sf = K.get<StagedFamily>()) {
    j["kind"] = "staged";
    j["system"] = system_json(sf->ambient);
    j["x0"] = sf->x0.to_literal();
    j["resolution"] = sf->resolution;
    Json stages = Json::array();
    for (const auto& st : sf->stages) stages.push_back(stage_json(st));
    j["stages"] = stages;
    return j;
  }
  if (const auto* ws = K.get<WholeSpace>()) {
    j["kind"] = "whole";
    j["system"] = system_json(ws->shift);
    return j;
  }
  if (const auto* fan = K.get<FanSet>()) {
    j["kind"] = "fan";
    j["apex"] = fan->apex;
    if (fan->full_tail_from) j["full_tail_from"] = *fan->full_tail_from;
    Json balls = Json::object();
    for (const auto& [b, content] : fan->balls) balls[std::to_string(b)] = set_json(*content);
    j["balls"] = balls;
    return j;
  }
  fail(ErrorKind::kSchema, "set_json: unsupported representation");
}

SlidingBlockCode parse_code(const Json& j) {
  reject_unknown(j, {"kind", "source", "target", "memory", "anticipation", "rule"}, "code");
  if (field<std::string>(j, "kind", "code") != "code")
    fail(ErrorKind::kSchema, "code: kind must be 'code'");
  Subshift source = parse_system(j.at("source")).shift;
  Subshift target = parse_system(j.at("target")).shift;
  int memory = static_cast<int>(field_or<long long>(j, "memory", 0));
  int anticipation = static_cast<int>(field_or<long long>(j, "anticipation", 0));
  std::map<Word, Sym> rule;
  for (const auto& [key, value] : j.at("rule").items()) {
    rule[word_from_string(key)] = static_cast<Sym>(value.get<int>());
  }
  return SlidingBlockCode(std::move(source), std::move(target), memory, anticipation,
                          std::move(rule));
}

Json code_json(const SlidingBlockCode& c) {
  Json j;
  j["kind"] = "code";
  j["source"] = system_json(c.source());
  j["target"] = system_json(c.target());
  j["memory"] = c.memory();
  j["anticipation"] = c.anticipation();
  Json rule = Json::object();
  // Enumerate admissible windows in lexicographic order for stability.
  Word cur;
  auto walk = [&](auto&& self, int depth) -> void {
    if (depth == c.window()) {
      rule[word_to_string(cur)] = c.apply_window(cur);
      return;
    }
    for (int s = 0; s < c.source().alphabet_size(); ++s) {
      cur.push_back(static_cast<Sym>(s));
      if (c.source().word_admissible(cur)) self(self, depth + 1);
      cur.pop_back();
    }
  };
  walk(walk, 0);
  j["rule"] = rule;
  return j;
}

Json staged_artifact_json(const StagedFamily& fam, const LoweringCertificate& cert,
                          const RunConfig& config) {
  Json j;
  j["format"] = "symdyn-staged-family";
  j["version"] = "1";
  j["config"] = run_config_json(config);
  j["family"] = set_json(*CompactSet::make(fam));
  Json c;
  c["target"] = double_to_text(cert.target);
  c["resolution"] = cert.resolution;
  Json stages = Json::array();
  for (const auto& st : cert.stages) {
    Json s;
    s["l"] = st.l;
    s["floor_elh"] = st.floor_elh.to_decimal();
    s["new_count"] = st.new_count.to_decimal();
    s["cumulative"] = st.cumulative.to_decimal();
    stages.push_back(s);
  }
  c["stages"] = stages;
  c["counts_ok"] = cert.counts_ok;
  c["bounds_ok"] = cert.bounds_ok;
  Json bounds = Json::array();
  for (const auto& b : cert.bound_lines) {
    Json s;
    s["horizon"] = b.horizon;
    s["lower"] = b.lower.to_decimal();
    s["count"] = b.count.to_decimal();
    s["upper"] = b.upper.to_decimal();
    s["ok"] = b.ok;
    bounds.push_back(s);
  }
  c["bounds"] = bounds;
  j["certificate"] = c;
  return j;
}

ArtifactCheck verify_staged_artifact(const Json& artifact) {
  ArtifactCheck out;
  try {
    if (field<std::string>(artifact, "format", "artifact") != "symdyn-staged-family") {
      out.message = "not a staged-family artifact";
      return out;
    }
    auto K = parse_set(artifact.at("family"));
    const auto* fam = K->get<StagedFamily>();
    if (!fam) {
      out.message = "artifact family is not staged";
      return out;
    }
    auto diag = validate_staged(*fam);
    if (!diag.pass) {
      out.message = "validate_staged failed: " + diag.first_violation;
      return out;
    }
    const Json& c = artifact.at("certificate");
    double target = double_from_text(field<std::string>(c, "target", "certificate"));
    long long resolution = field<long long>(c, "resolution", "certificate");
    if (resolution != fam->resolution) {
      out.message = "certificate resolution differs from the family";
      return out;
    }
    // Reproduce the construction and compare each integer.
    PointSource src(fam->ambient, fam->x0, resolution);
    auto [refam, recert] = staged_lower(src, target, static_cast<int>(c.at("stages").size()));
    if (!recert.counts_ok || !recert.bounds_ok) {
      out.message = "reconstruction failed its own certificate";
      return out;
    }
    const Json& stages = c.at("stages");
    if (stages.size() != recert.stages.size()) {
      out.message = "stage count mismatch";
      return out;
    }
    for (std::size_t i = 0; i < recert.stages.size(); ++i) {
      const Json& s = stages[i];
      if (s.at("l").get<long long>() != recert.stages[i].l ||
          s.at("floor_elh").get<std::string>() != recert.stages[i].floor_elh.to_decimal() ||
          s.at("new_count").get<std::string>() != recert.stages[i].new_count.to_decimal() ||
          s.at("cumulative").get<std::string>() != recert.stages[i].cumulative.to_decimal()) {
        out.message = "certificate integers do not reproduce at stage " + std::to_string(i + 1);
        return out;
      }
    }
    // The stored family must match the reconstruction stage by stage.
    if (canonical_dump(set_json(*K)) != canonical_dump(set_json(*CompactSet::make(refam)))) {
      out.message = "family serialization differs from the reconstruction";
      return out;
    }
    out.valid = true;
    out.message = "certificate reproduced bit-exactly";
    return out;
  } catch (const Error& e) {
    out.message = std::string(error_kind_name(e.kind())) + ": " + e.what();
    return out;
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kSchema, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorKind::kSchema, std::string("bad JSON in ") + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  // Atomic enough for our purposes: write a sibling then rename.
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorKind::kPrecondition, "cannot write " + tmp);
    out << text;
  }
  std::rename(tmp.c_str(), path.c_str());
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace symdyn

#include "symdyn/core.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace symdyn {

namespace {

char sym_to_char(Sym s) {
  if (s < 10) return static_cast<char>('0' + s);
  if (s < 36) return static_cast<char>('a' + (s - 10));
  fail(ErrorKind::kInternal, "symbol too large for text form");
}

Sym char_to_sym(char c) {
  if (c >= '0' && c <= '9') return static_cast<Sym>(c - '0');
  if (c >= 'a' && c <= 'z') return static_cast<Sym>(c - 'a' + 10);
  fail(ErrorKind::kSchema, std::string("bad symbol character '") + c + "'");
}

// Shortest p with w = (prefix of length p) repeated.
std::size_t primitive_period(const Word& w) {
  for (std::size_t p = 1; p <= w.size(); ++p) {
    if (w.size() % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < w.size() && ok; ++i) ok = (w[i] == w[i % p]);
    if (ok) return p;
  }
  return w.size();
}

}  // namespace

std::string word_to_string(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (Sym s : w) out.push_back(sym_to_char(s));
  return out;
}

Word word_from_string(const std::string& s) {
  Word out;
  out.reserve(s.size());
  for (char c : s) out.push_back(char_to_sym(c));
  return out;
}

bool Alphabet::valid_word(const Word& w) const {
  return std::all_of(w.begin(), w.end(),
                     [&](Sym s) { return static_cast<int>(s) < size; });
}

WindowSpec separation_window(long long n, long long m) {
  if (n < 1 || m < 1) fail(ErrorKind::kPrecondition, "separation_window needs n,m >= 1");
  return {1 - m, n + m - 2};
}

WindowSpec ball_window(long long l, long long m) {
  if (l < 1 || m < 1) fail(ErrorKind::kPrecondition, "ball_window needs l,m >= 1");
  return {-m, l - 1 + m};
}

BiInfinitePoint::BiInfinitePoint(Word left_period, Word center, Word right_period,
                                 long long anchor)
    : left_(std::move(left_period)),
      center_(std::move(center)),
      right_(std::move(right_period)),
      anchor_(anchor) {
  if (left_.empty() || right_.empty())
    fail(ErrorKind::kPrecondition, "periodic tails must be non-empty");
  canonicalize();
}

Sym BiInfinitePoint::at(long long i) const {
  long long rs = right_start();
  if (i >= rs) {
    return right_[static_cast<std::size_t>((i - rs) % static_cast<long long>(right_.size()))];
  }
  if (i >= anchor_) return center_[static_cast<std::size_t>(i - anchor_)];
  long long ell = static_cast<long long>(left_.size());
  long long j = (anchor_ - 1 - i) % ell;  // distance back from tail end
  return left_[static_cast<std::size_t>(ell - 1 - j)];
}

void BiInfinitePoint::canonicalize() {
  left_.resize(primitive_period(left_));
  right_.resize(primitive_period(right_));
  const long long ell = static_cast<long long>(left_.size());
  const long long r = static_cast<long long>(right_.size());

  // Slide the right-tail start left while the r-periodic pattern extends.
  long long rho = right_start();
  const long long cap =
      static_cast<long long>(center_.size()) + 2 * (ell + r + ell * r) + 4;
  long long steps = 0;
  while (steps < cap && at(rho - 1) == at(rho - 1 + r)) {
    --rho;
    ++steps;
  }
  if (steps >= cap) {
    // The r-pattern propagates through a full left period: the point is
    // globally r-periodic.  Normalize to anchor 0.
    Word w(static_cast<std::size_t>(r));
    for (long long i = 0; i < r; ++i) w[static_cast<std::size_t>(i)] = at(i);
    w.resize(primitive_period(w));
    left_ = w;
    right_ = w;
    center_.clear();
    anchor_ = 0;
    return;
  }

  // Extend the left-periodic zone right as far as it matches.
  long long lambda = std::min(anchor_, rho);
  while (lambda < rho && at(lambda) == at(lambda - ell)) ++lambda;

  Word new_left(static_cast<std::size_t>(ell));
  for (long long i = 0; i < ell; ++i)
    new_left[static_cast<std::size_t>(i)] = at(lambda - ell + i);
  Word new_center(static_cast<std::size_t>(rho - lambda));
  for (long long i = lambda; i < rho; ++i)
    new_center[static_cast<std::size_t>(i - lambda)] = at(i);
  Word new_right(static_cast<std::size_t>(r));
  for (long long i = 0; i < r; ++i)
    new_right[static_cast<std::size_t>(i)] = at(rho + i);

  left_ = std::move(new_left);
  center_ = std::move(new_center);
  right_ = std::move(new_right);
  anchor_ = center_.empty() ? rho : lambda;
}

Word BiInfinitePoint::window(const WindowSpec& w) const {
  Word out(static_cast<std::size_t>(w.length()));
  for (long long i = w.lo; i <= w.hi; ++i)
    out[static_cast<std::size_t>(i - w.lo)] = at(i);
  return out;
}

BiInfinitePoint BiInfinitePoint::shifted(long long t) const {
  return BiInfinitePoint(left_, center_, right_, anchor_ - t);
}

int BiInfinitePoint::max_symbol() const {
  int m = 0;
  for (Sym s : left_) m = std::max(m, static_cast<int>(s));
  for (Sym s : center_) m = std::max(m, static_cast<int>(s));
  for (Sym s : right_) m = std::max(m, static_cast<int>(s));
  return m;
}

bool BiInfinitePoint::operator<(const BiInfinitePoint& o) const {
  if (anchor_ != o.anchor_) return anchor_ < o.anchor_;
  if (left_ != o.left_) return left_ < o.left_;
  if (center_ != o.center_) return center_ < o.center_;
  return right_ < o.right_;
}

BiInfinitePoint BiInfinitePoint::parse(const std::string& literal) {
  auto at_pos = literal.rfind('@');
  if (at_pos == std::string::npos) fail(ErrorKind::kSchema, "point literal needs '@anchor'");
  std::string body = literal.substr(0, at_pos);
  long long anchor = 0;
  try {
    anchor = std::stoll(literal.substr(at_pos + 1));
  } catch (const std::exception&) {
    fail(ErrorKind::kSchema, "bad anchor in point literal");
  }
  auto d1 = body.find('.');
  auto d2 = body.rfind('.');
  if (d1 == std::string::npos || d1 == d2)
    fail(ErrorKind::kSchema, "point literal is left.center.right@anchor");
  Word l = word_from_string(body.substr(0, d1));
  Word c = word_from_string(body.substr(d1 + 1, d2 - d1 - 1));
  Word r = word_from_string(body.substr(d2 + 1));
  return BiInfinitePoint(std::move(l), std::move(c), std::move(r), anchor);
}

std::string BiInfinitePoint::to_literal() const {
  std::ostringstream os;
  os << word_to_string(left_) << '.' << word_to_string(center_) << '.'
     << word_to_string(right_) << '@' << anchor_;
  return os.str();
}

Subshift Subshift::full(int alphabet_size) {
  Subshift s;
  s.k_ = alphabet_size;
  s.finish_setup();
  return s;
}

Subshift Subshift::forbid(int alphabet_size, std::vector<Word> forbidden, bool one_sided) {
  Subshift s;
  s.k_ = alphabet_size;
  s.one_sided_ = one_sided;
  s.forbidden_ = std::move(forbidden);
  s.finish_setup();
  return s;
}

Subshift Subshift::from_matrix(const std::vector<std::vector<int>>& allow, bool one_sided) {
  std::vector<Word> forbidden;
  int k = static_cast<int>(allow.size());
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(allow[a].size()) != k)
      fail(ErrorKind::kSchema, "transition matrix must be square");
    for (int b = 0; b < k; ++b) {
      if (!allow[a][b])
        forbidden.push_back(Word{static_cast<Sym>(a), static_cast<Sym>(b)});
    }
  }
  return forbid(k, std::move(forbidden), one_sided);
}

void Subshift::finish_setup() {
  if (k_ < 1) fail(ErrorKind::kSchema, "alphabet size must be >= 1");
  if (k_ > 250) fail(ErrorKind::kSchema, "alphabet size too large");
  one_step_ = true;
  max_forbidden_len_ = 0;
  for (const Word& w : forbidden_) {
    if (w.empty()) fail(ErrorKind::kSchema, "forbidden words must be non-empty");
    for (Sym s : w) {
      if (static_cast<int>(s) >= k_)
        fail(ErrorKind::kSchema, "forbidden word symbol outside alphabet");
    }
    max_forbidden_len_ = std::max(max_forbidden_len_, w.size());
    if (w.size() > 2) one_step_ = false;
  }
  if (one_step_) {
    allow_.assign(k_, std::vector<int>(k_, 1));
    for (const Word& w : forbidden_) {
      if (w.size() == 2) allow_[w[0]][w[1]] = 0;
      if (w.size() == 1) {
        for (int b = 0; b < k_; ++b) {
          allow_[w[0]][b] = 0;
          allow_[b][w[0]] = 0;
        }
      }
    }
  } else {
    allow_.clear();
  }
}

bool Subshift::transition_allowed(Sym a, Sym b) const {
  if (!one_step_) fail(ErrorKind::kNotOneStep, "transition matrix needs a 1-step SFT");
  return allow_[a][b] != 0;
}

const std::vector<std::vector<int>>& Subshift::matrix() const {
  if (!one_step_) fail(ErrorKind::kNotOneStep, "transition matrix needs a 1-step SFT");
  return allow_;
}

bool Subshift::word_admissible(const Word& w) const {
  for (Sym s : w) {
    if (static_cast<int>(s) >= k_) return false;
  }
  for (const Word& f : forbidden_) {
    if (f.size() > w.size()) continue;
    for (std::size_t i = 0; i + f.size() <= w.size(); ++i) {
      if (std::equal(f.begin(), f.end(), w.begin() + static_cast<long>(i))) return false;
    }
  }
  return true;
}

bool Subshift::point_admissible(const BiInfinitePoint& p) const {
  if (p.max_symbol() >= k_) return false;
  long long f = static_cast<long long>(std::max<std::size_t>(max_forbidden_len_, 2));
  long long ell = static_cast<long long>(p.left_period().size());
  long long r = static_cast<long long>(p.right_period().size());
  long long lo = p.left_end() - 2 * ell - f;
  long long hi = p.right_start() + 2 * r + f;
  return word_admissible(p.window({lo, hi}));
}

bool Subshift::irreducible() const {
  if (is_full()) return true;
  if (!one_step_) fail(ErrorKind::kNotOneStep, "irreducibility check needs a 1-step SFT");
  for (int s = 0; s < k_; ++s) {
    std::vector<char> seen(k_, 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < k_; ++b) {
        if (allow_[a][b] && !seen[b]) {
          seen[b] = 1;
          stack.push_back(b);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  }
  return true;
}

std::optional<int> Subshift::mixing_gap(int cap) const {
  if (is_full()) return 1;
  if (!one_step_) return std::nullopt;
  std::vector<std::vector<char>> reach(k_, std::vector<char>(k_, 0));
  for (int a = 0; a < k_; ++a)
    for (int b = 0; b < k_; ++b) reach[a][b] = allow_[a][b] ? 1 : 0;
  auto all_pos = [&]() {
    for (auto& row : reach)
      for (char c : row)
        if (!c) return false;
    return true;
  };
  for (int step = 1; step <= cap; ++step) {
    if (all_pos()) return step;
    std::vector<std::vector<char>> next(k_, std::vector<char>(k_, 0));
    for (int a = 0; a < k_; ++a)
      for (int c = 0; c < k_; ++c)
        if (reach[a][c])
          for (int b = 0; b < k_; ++b)
            if (allow_[c][b]) next[a][b] = 1;
    reach = std::move(next);
  }
  return std::nullopt;
}

std::optional<Sym> Subshift::forced_successor(Sym a) const {
  if (is_full()) return k_ == 1 ? std::optional<Sym>(0) : std::nullopt;
  std::optional<Sym> only;
  for (int b = 0; b < k_; ++b) {
    if (allow_[a][b]) {
      if (only) return std::nullopt;
      only = static_cast<Sym>(b);
    }
  }
  return only;
}

std::vector<Sym> Subshift::successors(Sym a) const {
  std::vector<Sym> out;
  for (int b = 0; b < k_; ++b) {
    if (is_full() || allow_[a][b]) out.push_back(static_cast<Sym>(b));
  }
  return out;
}

std::vector<Sym> Subshift::predecessors(Sym b) const {
  std::vector<Sym> out;
  for (int a = 0; a < k_; ++a) {
    if (is_full() || allow_[a][b]) out.push_back(static_cast<Sym>(a));
  }
  return out;
}

std::pair<Subshift, std::vector<Word>> Subshift::reblock(int m) const {
  if (m < 1) fail(ErrorKind::kPrecondition, "block length must be >= 1");
  std::vector<Word> blocks;
  Word cur;
  // Enumerate admissible m-words in lexicographic order.
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == m) {
      blocks.push_back(cur);
      return;
    }
    for (int s = 0; s < k_; ++s) {
      cur.push_back(static_cast<Sym>(s));
      if (word_admissible(cur)) self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  if (blocks.size() > 250)
    fail(ErrorKind::kEnumerationTooLarge, "re-blocked alphabet exceeds 250 symbols");
  int nk = static_cast<int>(blocks.size());
  std::vector<std::vector<int>> allow(nk, std::vector<int>(nk, 0));
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      Word joined = blocks[i];
      joined.insert(joined.end(), blocks[j].begin(), blocks[j].end());
      allow[i][j] = word_admissible(joined) ? 1 : 0;
    }
  }
  return {Subshift::from_matrix(allow, one_sided_), blocks};
}

std::pair<Subshift, std::vector<Word>> Subshift::higher_block(int m) const {
  if (m < 1) fail(ErrorKind::kPrecondition, "block length must be >= 1");
  if (static_cast<std::size_t>(m) < max_forbidden_len_ - 1 && max_forbidden_len_ > 2)
    fail(ErrorKind::kPrecondition, "block length too short to absorb forbidden words");
  std::vector<Word> blocks;
  Word cur;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == m) {
      blocks.push_back(cur);
      return;
    }
    for (int s = 0; s < k_; ++s) {
      cur.push_back(static_cast<Sym>(s));
      if (word_admissible(cur)) self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  if (blocks.size() > 250)
    fail(ErrorKind::kEnumerationTooLarge, "higher-block alphabet exceeds 250 symbols");
  int nk = static_cast<int>(blocks.size());
  std::vector<std::vector<int>> allow(nk, std::vector<int>(nk, 0));
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      bool overlap = std::equal(blocks[i].begin() + 1, blocks[i].end(), blocks[j].begin());
      if (!overlap) continue;
      Word joined = blocks[i];
      joined.push_back(blocks[j].back());
      allow[i][j] = word_admissible(joined) ? 1 : 0;
    }
  }
  return {Subshift::from_matrix(allow, one_sided_), blocks};
}

std::string Subshift::describe() const {
  std::ostringstream os;
  os << (one_sided_ ? "one-sided " : "") << (is_full() ? "full " : "") << "shift on "
     << k_ << " symbols";
  if (!forbidden_.empty()) {
    os << ", forbidden {";
    for (std::size_t i = 0; i < forbidden_.size(); ++i) {
      if (i) os << ",";
      os << word_to_string(forbidden_[i]);
    }
    os << "}";
  }
  return os.str();
}

BiInfinitePoint shift_by(const BiInfinitePoint& p, long long t) { return p.shifted(t); }

Word window_of(const BiInfinitePoint& p, const WindowSpec& w) { return p.window(w); }

bool is_admissible(const Subshift& s, const Word& w) { return s.word_admissible(w); }

bool is_admissible(const Subshift& s, const BiInfinitePoint& p) {
  return s.point_admissible(p);
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kSchema: return "SchemaError";
    case ErrorKind::kPrecondition: return "PreconditionError";
    case ErrorKind::kWindowExceedsDepth: return "WindowExceedsDepth";
    case ErrorKind::kUncertifiedTail: return "UncertifiedTail";
    case ErrorKind::kHorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::kNotOneStep: return "NotOneStep";
    case ErrorKind::kResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::kInadmissibleWord: return "InadmissibleWord";
    case ErrorKind::kInadmissibleInput: return "InadmissibleInput";
    case ErrorKind::kKExceedsDepth: return "KExceedsDepth";
    case ErrorKind::kDepthMismatch: return "DepthMismatch";
    case ErrorKind::kZeroMass: return "ZeroMass";
    case ErrorKind::kNotMixing: return "NotMixing";
    case ErrorKind::kZeroEntropyAmbient: return "ZeroEntropyAmbient";
    case ErrorKind::kSourceCapacityExceeded: return "SourceCapacityExceeded";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kTargetOutOfRange: return "TargetOutOfRange";
    case ErrorKind::kSourceUnavailable: return "SourceUnavailable";
    case ErrorKind::kNotSurjective: return "NotSurjective";
    case ErrorKind::kEnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::kInternal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace symdyn

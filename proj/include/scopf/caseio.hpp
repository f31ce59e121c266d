#ifndef SCOPF_CASEIO_HPP
#define SCOPF_CASEIO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "scopf/acfun.hpp"
#include "scopf/netmodel.hpp"

namespace scopf {

// ---- case file ----------------------------------------------------------------
//
// Single structured text file, '#' comments, comma-separated fields, section
// headers [meta] [buses] [generators] [branches] [penalties].  Field order per
// section matches the data-model field order; all values per-unit.

class CaseParseError : public std::runtime_error {
public:
  CaseParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit CaseParseError(const std::string& what) : std::runtime_error(what), line_(0) {}
  int line() const { return line_; }

private:
  int line_;
};

namespace detail {

inline double need_double(const std::vector<std::string_view>& f, std::size_t i, int line) {
  double v;
  if (i >= f.size() || !parse_double(f[i], v))
    throw CaseParseError(line, "expected a number in field " + std::to_string(i + 1));
  return v;
}

inline int need_int(const std::vector<std::string_view>& f, std::size_t i, int line) {
  int v;
  if (i >= f.size() || !parse_int(f[i], v))
    throw CaseParseError(line, "expected an integer in field " + std::to_string(i + 1));
  return v;
}

inline std::vector<PenaltyBlock> parse_blocks(const std::vector<std::string_view>& f,
                                              int line) {
  if (f.size() < 3 || f.size() % 2 == 0)
    throw CaseParseError(line, "penalty row needs pairs of width,price");
  std::vector<PenaltyBlock> blocks;
  for (std::size_t i = 1; i + 1 < f.size(); i += 2)
    blocks.push_back({need_double(f, i, line), need_double(f, i + 1, line)});
  return blocks;
}

}  // namespace detail

inline Network parse_case(std::istream& in) {
  Network net;
  net.penalty_schedule = default_penalty_schedule();
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw CaseParseError(lineno, "unterminated section header");
      section = std::string(s.substr(1, s.size() - 2));
      if (section != "meta" && section != "buses" && section != "generators" &&
          section != "branches" && section != "penalties")
        throw CaseParseError(lineno, "unknown section [" + section + "]");
      continue;
    }
    auto f = split_csv(s);
    using namespace detail;
    if (section == "meta") {
      if (f.size() >= 2 && f[0] == "base_power")
        net.base_power = need_double(f, 1, lineno);
      else
        throw CaseParseError(lineno, "unknown meta entry");
    } else if (section == "buses") {
      if (f.size() != 11) throw CaseParseError(lineno, "bus row needs 11 fields");
      Bus b;
      b.id = need_int(f, 0, lineno);
      b.v_min = need_double(f, 1, lineno);
      b.v_max = need_double(f, 2, lineno);
      b.v_min_emerg = need_double(f, 3, lineno);
      b.v_max_emerg = need_double(f, 4, lineno);
      b.p_load = need_double(f, 5, lineno);
      b.q_load = need_double(f, 6, lineno);
      b.g_shunt_fixed = need_double(f, 7, lineno);
      b.b_shunt_fixed = need_double(f, 8, lineno);
      b.b_cs_min = need_double(f, 9, lineno);
      b.b_cs_max = need_double(f, 10, lineno);
      net.buses.push_back(b);
    } else if (section == "generators") {
      if (f.size() < 9 || (f.size() - 7) % 2 != 0)
        throw CaseParseError(lineno, "generator row needs 7 fields plus (p,marginal) pairs");
      Generator g;
      g.id = need_int(f, 0, lineno);
      g.bus = need_int(f, 1, lineno);
      g.p_min = need_double(f, 2, lineno);
      g.p_max = need_double(f, 3, lineno);
      g.q_min = need_double(f, 4, lineno);
      g.q_max = need_double(f, 5, lineno);
      g.alpha = f[6].empty() ? -1.0 : need_double(f, 6, lineno);
      for (std::size_t i = 7; i + 1 < f.size(); i += 2)
        g.cost_points.push_back({need_double(f, i, lineno), need_double(f, i + 1, lineno)});
      net.generators.push_back(g);
    } else if (section == "branches") {
      if (f.size() != 10) throw CaseParseError(lineno, "branch row needs 10 fields");
      Branch b;
      b.id = need_int(f, 0, lineno);
      b.from_bus = need_int(f, 1, lineno);
      b.to_bus = need_int(f, 2, lineno);
      b.r = need_double(f, 3, lineno);
      b.x = need_double(f, 4, lineno);
      b.b_ch = need_double(f, 5, lineno);
      b.tap = need_double(f, 6, lineno);
      b.phase = need_double(f, 7, lineno);
      b.rating_normal = need_double(f, 8, lineno);
      b.rating_emerg = need_double(f, 9, lineno);
      net.branches.push_back(b);
    } else if (section == "penalties") {
      if (f.empty()) continue;
      if (f[0] == "balance") {
        net.penalty_schedule.blocks_balance = parse_blocks(f, lineno);
      } else if (f[0] == "rating") {
        net.penalty_schedule.blocks_rating = parse_blocks(f, lineno);
      } else {
        throw CaseParseError(lineno, "penalty row must start with 'balance' or 'rating'");
      }
    } else {
      throw CaseParseError(lineno, "data before any section header");
    }
  }
  auto violations = validate(net);
  if (!violations.empty()) {
    std::string msg = "case data invalid:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw CaseParseError(msg);
  }
  net.finalize();
  return net;
}

inline Network parse_case_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CaseParseError("cannot open case file: " + path.string());
  return parse_case(in);
}

// ---- contingency file ----------------------------------------------------------
//
// One line per contingency: label,kind,element_id with kind in {GEN, BRANCH}.

inline std::vector<Contingency> parse_contingencies(std::istream& in, const Network& net) {
  std::vector<Contingency> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto f = split_csv(s);
    if (f.size() != 3) throw CaseParseError(lineno, "contingency row needs label,kind,element");
    Contingency c;
    c.label = std::string(f[0]);
    if (f[1] == "GEN")
      c.kind = OutageKind::Generator;
    else if (f[1] == "BRANCH")
      c.kind = OutageKind::Branch;
    else
      throw CaseParseError(lineno, "kind must be GEN or BRANCH");
    c.element = detail::need_int(f, 2, lineno);
    if (c.kind == OutageKind::Generator && net.gen_index(c.element) < 0)
      throw CaseParseError(lineno, "unknown generator id " + std::to_string(c.element));
    if (c.kind == OutageKind::Branch && net.branch_index(c.element) < 0)
      throw CaseParseError(lineno, "unknown branch id " + std::to_string(c.element));
    for (const auto& prev : out)
      if (prev.label == c.label)
        throw CaseParseError(lineno, "duplicate contingency label '" + c.label + "'");
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<Contingency> parse_contingency_file(const std::filesystem::path& path,
                                                       const Network& net) {
  std::ifstream in(path);
  if (!in) throw CaseParseError("cannot open contingency file: " + path.string());
  return parse_contingencies(in, net);
}

// ---- solution files ------------------------------------------------------------
//
// Physical units on disk (MW, MVAr, degrees, MVAr-at-v=1 for switched shunts),
// per-unit in memory.  Writers emit exactly 8 fractional digits, fixed point.

constexpr double kRadPerDeg = 3.14159265358979323846 / 180.0;

inline void format_solution1(const Network& net, const OperatingPoint& x, std::ostream& os) {
  os << "--bus section\n";
  for (std::size_t i = 0; i < net.n_buses(); ++i)
    os << net.buses[i].id << ',' << format_fixed8(x.v[i]) << ','
       << format_fixed8(x.theta[i] / kRadPerDeg) << ','
       << format_fixed8(x.b_cs[i] * net.base_power) << '\n';
  os << "--generator section\n";
  for (std::size_t g = 0; g < net.n_gens(); ++g)
    os << net.generators[g].id << ',' << format_fixed8(x.p[g] * net.base_power) << ','
       << format_fixed8(x.q[g] * net.base_power) << '\n';
}

struct Solution2Block {
  std::string label;
  OperatingPoint point;  // point.delta always set
};

inline void format_solution2(const Network& net, const std::vector<Solution2Block>& blocks,
                             std::ostream& os) {
  for (const auto& blk : blocks) {
    os << "--contingency," << blk.label << '\n';
    format_solution1(net, blk.point, os);
    os << "--delta section\n";
    os << format_fixed8(blk.point.delta.value_or(0.0) * net.base_power) << '\n';
  }
}

// Atomic replace: write to a temp file in the same directory, then rename, so
// a partially written file is never observed by the scorer.
inline void write_atomic(const std::filesystem::path& path, const std::string& payload) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << payload;
    if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_solution1(const Network& net, const OperatingPoint& x,
                            const std::filesystem::path& path) {
  std::ostringstream os;
  format_solution1(net, x, os);
  write_atomic(path, os.str());
}

inline void write_solution2(const Network& net, const std::vector<Solution2Block>& blocks,
                            const std::filesystem::path& path) {
  std::ostringstream os;
  format_solution2(net, blocks, os);
  write_atomic(path, os.str());
}

// Readers return a structured error instead of throwing: a missing file, a
// wrong record count or a non-numeric field must fold into the worst-case
// score, not abort the evaluator.
template <typename T>
struct ReadResult {
  std::optional<T> value;
  std::string error;
  bool ok() const { return value.has_value(); }
};

namespace detail {

struct SolutionSectionReader {
  std::istream& in;
  int lineno = 0;
  std::string pending;
  bool has_pending = false;

  bool next_line(std::string& out) {
    if (has_pending) {
      out = pending;
      has_pending = false;
      return true;
    }
    while (std::getline(in, out)) {
      ++lineno;
      if (!trim(out).empty()) return true;
    }
    return false;
  }
  void push_back(const std::string& line) {
    pending = line;
    has_pending = true;
  }
};

// Reads one bus section + generator section into x. Returns an empty string on
// success, else the error description.
inline std::string read_point_sections(SolutionSectionReader& r, const Network& net,
                                       OperatingPoint& x) {
  std::string line;
  if (!r.next_line(line) || trim(line) != "--bus section")
    return "expected '--bus section' near line " + std::to_string(r.lineno);
  x = OperatingPoint::zeros(net);
  std::vector<char> bus_seen(net.n_buses(), 0), gen_seen(net.n_gens(), 0);
  for (std::size_t n = 0; n < net.n_buses(); ++n) {
    if (!r.next_line(line)) return "bus section: wrong record count";
    auto f = split_csv(trim(line));
    int id;
    double v, theta_deg, bcs_mvar;
    if (f.size() != 4 || !parse_int(f[0], id) || !parse_double(f[1], v) ||
        !parse_double(f[2], theta_deg) || !parse_double(f[3], bcs_mvar))
      return "bus section: malformed row at line " + std::to_string(r.lineno);
    int i = net.bus_index(id);
    if (i < 0) return "bus section: unknown bus id " + std::to_string(id);
    if (bus_seen[i]) return "bus section: duplicate bus id " + std::to_string(id);
    bus_seen[i] = 1;
    x.v[i] = v;
    x.theta[i] = theta_deg * kRadPerDeg;
    x.b_cs[i] = bcs_mvar / net.base_power;
  }
  if (!r.next_line(line) || trim(line) != "--generator section")
    return "expected '--generator section' near line " + std::to_string(r.lineno);
  for (std::size_t n = 0; n < net.n_gens(); ++n) {
    if (!r.next_line(line)) return "generator section: wrong record count";
    auto f = split_csv(trim(line));
    int id;
    double p_mw, q_mvar;
    if (f.size() != 3 || !parse_int(f[0], id) || !parse_double(f[1], p_mw) ||
        !parse_double(f[2], q_mvar))
      return "generator section: malformed row at line " + std::to_string(r.lineno);
    int g = net.gen_index(id);
    if (g < 0) return "generator section: unknown generator id " + std::to_string(id);
    if (gen_seen[g]) return "generator section: duplicate generator id " + std::to_string(id);
    gen_seen[g] = 1;
    x.p[g] = p_mw / net.base_power;
    x.q[g] = q_mvar / net.base_power;
  }
  for (std::size_t i = 0; i < net.n_buses(); ++i)
    if (!std::isfinite(x.v[i]) || !std::isfinite(x.theta[i]) || !std::isfinite(x.b_cs[i]))
      return "bus section: non-finite value";
  for (std::size_t g = 0; g < net.n_gens(); ++g)
    if (!std::isfinite(x.p[g]) || !std::isfinite(x.q[g]))
      return "generator section: non-finite value";
  return {};
}

}  // namespace detail

inline ReadResult<OperatingPoint> read_solution1(std::istream& in, const Network& net) {
  detail::SolutionSectionReader r{in};
  OperatingPoint x;
  if (auto err = detail::read_point_sections(r, net, x); !err.empty()) return {{}, err};
  std::string extra;
  if (r.next_line(extra)) return {{}, "trailing content after generator section"};
  return {std::move(x), {}};
}

inline ReadResult<OperatingPoint> read_solution1_file(const std::filesystem::path& path,
                                                      const Network& net) {
  std::ifstream in(path);
  if (!in) return {{}, "file does not exist: " + path.string()};
  return read_solution1(in, net);
}

// Blocks must appear in contingency-file order, one block per contingency.
inline ReadResult<std::vector<Solution2Block>> read_solution2(
    std::istream& in, const Network& net, const std::vector<Contingency>& contingencies) {
  detail::SolutionSectionReader r{in};
  std::vector<Solution2Block> blocks;
  std::string line;
  for (const auto& con : contingencies) {
    if (!r.next_line(line))
      return {{}, "missing block for contingency '" + con.label + "'"};
    auto f = split_csv(trim(line));
    if (f.size() != 2 || f[0] != "--contingency")
      return {{}, "expected '--contingency,<label>' near line " + std::to_string(r.lineno)};
    if (f[1] != con.label)
      return {{}, "block order mismatch: expected '" + con.label + "', found '" +
                      std::string(f[1]) + "'"};
    Solution2Block blk;
    blk.label = con.label;
    if (auto err = detail::read_point_sections(r, net, blk.point); !err.empty())
      return {{}, "contingency '" + con.label + "': " + err};
    if (!r.next_line(line) || trim(line) != "--delta section")
      return {{}, "contingency '" + con.label + "': expected '--delta section'"};
    if (!r.next_line(line))
      return {{}, "contingency '" + con.label + "': missing delta row"};
    double delta_mw;
    if (!parse_double(trim(line), delta_mw))
      return {{}, "contingency '" + con.label + "': malformed delta row"};
    blk.point.delta = delta_mw / net.base_power;
    blocks.push_back(std::move(blk));
  }
  if (r.next_line(line)) return {{}, "trailing content after last contingency block"};
  return {std::move(blocks), {}};
}

inline ReadResult<std::vector<Solution2Block>> read_solution2_file(
    const std::filesystem::path& path, const Network& net,
    const std::vector<Contingency>& contingencies) {
  std::ifstream in(path);
  if (!in) return {{}, "file does not exist: " + path.string()};
  return read_solution2(in, net, contingencies);
}

}  // namespace scopf

#endif  // SCOPF_CASEIO_HPP

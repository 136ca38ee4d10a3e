#include "gossipsim/schedule_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

namespace gossipsim {

void write_dgs1(const AdversarySchedule& schedule, std::ostream& out) {
  out << "DGS1 " << schedule.node_count() << ' ' << schedule.horizon() << ' '
      << to_string(schedule.mode()) << '\n';
  const auto write_insertions = [&](Round r) {
    for (const auto& ev : schedule.insertions_at(r)) out << "I " << ev.node << ' ' << ev.token << '\n';
  };
  if (!schedule.insertions_at(0).empty()) {
    out << "R 0\n";
    write_insertions(0);
  }
  for (Round r = 1; r <= schedule.horizon(); ++r) {
    out << "R " << r << '\n';
    for (const auto& e : schedule.snapshot(r).edges()) out << "E " << e.u << ' ' << e.v << '\n';
    write_insertions(r);
  }
}

std::string to_dgs1(const AdversarySchedule& schedule) {
  std::ostringstream os;
  write_dgs1(schedule, os);
  return os.str();
}

namespace {

class LineParser {
 public:
  explicit LineParser(std::istream& in) : in_(in) {}

  bool next() {
    if (!std::getline(in_, line_)) return false;
    ++number_;
    if (in_.eof()) {
      // getline consumed the last line without a newline terminator.
      fail("missing trailing newline");
    }
    fields_.clear();
    std::string_view rest(line_);
    while (!rest.empty()) {
      const auto space = rest.find(' ');
      fields_.push_back(rest.substr(0, space));
      if (space == std::string_view::npos) break;
      rest.remove_prefix(space + 1);
      if (rest.empty()) fail("trailing space");
    }
    return true;
  }

  std::size_t number() const { return number_; }
  const std::vector<std::string_view>& fields() const { return fields_; }

  template <typename T>
  T integer(std::size_t index) const {
    if (index >= fields_.size()) fail("missing field");
    const auto f = fields_[index];
    T value{};
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
      fail("expected a decimal integer, got '" + std::string(f) + "'");
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ScheduleError("DGS1 line " + std::to_string(number_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
  std::vector<std::string_view> fields_;
};

}  // namespace

AdversarySchedule read_dgs1(std::istream& in) {
  LineParser p(in);
  if (!p.next()) throw ScheduleError("DGS1 line 1: empty input");
  if (p.fields().size() != 4 || p.fields()[0] != "DGS1") p.fail("malformed header");
  const auto n = p.integer<std::size_t>(1);
  const auto horizon = p.integer<Round>(2);
  ScheduleMode mode{};
  try {
    mode = parse_schedule_mode(p.fields()[3]);
  } catch (const ScheduleError& e) {
    p.fail(e.what());
  }
  if (n == 0) p.fail("node count must be positive");

  ScheduleBuilder builder(n, mode);
  Round current = -1;
  std::vector<Edge> edges;
  std::optional<std::pair<NodeId, TokenId>> last_insert;
  std::vector<std::size_t> round_lines;
  const auto flush = [&]() {
    if (current >= 1) {
      builder.add_round(NetworkSnapshot(n, std::move(edges)));
      edges.clear();
    }
  };
  while (p.next()) {
    const auto& f = p.fields();
    if (f.empty()) p.fail("empty line");
    if (f[0] == "R") {
      if (f.size() != 2) p.fail("malformed round line");
      const auto t = p.integer<Round>(1);
      const Round expected = current < 0 ? (t == 0 ? 0 : 1) : current + 1;
      if (t != expected) p.fail("expected round " + std::to_string(expected));
      flush();
      current = t;
      round_lines.push_back(p.number());
      last_insert.reset();
    } else if (f[0] == "E") {
      if (f.size() != 3) p.fail("malformed edge line");
      if (current < 1) p.fail("edge outside a round block");
      if (last_insert) p.fail("edge after insertion lines");
      const Edge e{p.integer<NodeId>(1), p.integer<NodeId>(2)};
      if (e.u >= e.v) p.fail("edge endpoints must satisfy u < v");
      if (e.v >= n) p.fail("edge endpoint outside node range");
      if (!edges.empty() && !(edges.back() < e)) p.fail("edges not in ascending order");
      edges.push_back(e);
    } else if (f[0] == "I") {
      if (f.size() != 3) p.fail("malformed insertion line");
      if (current < 0) p.fail("insertion outside a round block");
      const auto node = p.integer<NodeId>(1);
      const auto token = p.integer<TokenId>(2);
      if (node >= n) p.fail("insertion node outside node range");
      const std::pair<NodeId, TokenId> key{node, token};
      if (last_insert && !(*last_insert < key)) p.fail("insertions not in ascending order");
      last_insert = key;
      try {
        builder.insert(current, node, token);
      } catch (const ScheduleError& e) {
        p.fail(e.what());
      }
    } else {
      p.fail("unknown record '" + std::string(f[0]) + "'");
    }
  }
  flush();
  if (builder.rounds() != horizon) {
    throw ScheduleError("DGS1: header declares " + std::to_string(horizon) + " rounds, found " +
                        std::to_string(builder.rounds()));
  }
  auto schedule = builder.build(nlohmann::json::object(), false);
  schedule.validate();
  return schedule;
}

AdversarySchedule parse_dgs1(const std::string& text) {
  std::istringstream is(text);
  return read_dgs1(is);
}

std::filesystem::path metadata_path(const std::filesystem::path& schedule_path) {
  auto p = schedule_path;
  p += ".json";
  return p;
}

void save_schedule(const AdversarySchedule& schedule, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_dgs1(schedule, out);
  }
  std::ofstream meta(metadata_path(path), std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + metadata_path(path).string());
  auto m = schedule.metadata();
  m["cyclic_extendable"] = schedule.cyclic_extendable();
  meta << m.dump(2) << '\n';
}

AdversarySchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto schedule = read_dgs1(in);
  const auto meta_file = metadata_path(path);
  if (std::filesystem::exists(meta_file)) {
    std::ifstream meta(meta_file);
    auto j = nlohmann::json::parse(meta);
    schedule.set_cyclic_extendable(j.value("cyclic_extendable", false));
    schedule.metadata() = std::move(j);
  }
  return schedule;
}

}  // namespace gossipsim

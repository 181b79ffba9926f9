#include "evrisk/chain.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "evrisk/errors.hpp"

namespace evrisk {

namespace {

constexpr const char* kHeader =
    "ticker,snapshot_date,ead_date,phase,expiry_days,spot,rate,moneyness,iv";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw MalformedRow(ctx + ": bad numeric field '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& ctx) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw MalformedRow(ctx + ": bad integer field '" + s + "'");
  }
  return v;
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Phase infer_phase(const Date& snap, const Date& ead) {
  if (snap < ead) return Phase::BeforeEAD;
  if (ead < snap) return Phase::AfterEAD;
  return Phase::OnEAD;
}

struct GroupKey {
  std::string ticker;
  long long snap;
  long long ead;
  auto operator<=>(const GroupKey&) const = default;
};

}  // namespace

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::BeforeEAD: return "before";
    case Phase::OnEAD: return "on";
    case Phase::AfterEAD: return "after";
  }
  return "?";
}

void validate_snapshot(const ChainSnapshot& snap, const std::string& context) {
  auto fail = [&](const std::string& what) {
    throw InvariantViolation(context + ": " + what);
  };
  if (snap.observations.size() < 3) fail("fewer than 3 observations");
  if (snap.expiry_days < 1) fail("expiry_days < 1");
  if (!(snap.spot > 0.0)) fail("nonpositive spot");
  for (size_t i = 0; i < snap.observations.size(); ++i) {
    const auto& o = snap.observations[i];
    if (!(o.moneyness > 0.0)) fail("nonpositive moneyness");
    if (!(o.iv > 0.0)) fail("nonpositive iv");
    if (!(o.iv < 10.0)) fail("iv outside sanity bound (>= 10)");
    if (i > 0 && !(snap.observations[i - 1].moneyness < o.moneyness)) {
      fail("duplicate moneyness " + shortest(o.moneyness));
    }
  }
  if (snap.phase == Phase::BeforeEAD && !(snap.snapshot_date < snap.ead_date)) {
    fail("phase 'before' but snapshot_date not earlier than ead_date");
  }
  if (snap.phase == Phase::AfterEAD && !(snap.ead_date < snap.snapshot_date)) {
    fail("phase 'after' but snapshot_date not later than ead_date");
  }
}

std::vector<ChainSnapshot> parse_snapshot_csv(std::istream& in,
                                              const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyFile(name + ": no content");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw MalformedRow(name + ":1: header must be exactly '" +
                       std::string(kHeader) + "'");
  }

  std::map<GroupKey, size_t> index;
  std::vector<ChainSnapshot> out;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string ctx = name + ":" + std::to_string(row);
    auto f = split_fields(line);
    if (f.size() != 9) {
      throw MalformedRow(ctx + ": expected 9 fields, got " +
                         std::to_string(f.size()));
    }
    ChainSnapshot snap;
    snap.ticker = f[0];
    if (snap.ticker.empty()) throw MalformedRow(ctx + ": empty ticker");
    snap.snapshot_date = parse_date(f[1]);
    snap.ead_date = parse_date(f[2]);
    if (f[3].empty()) {
      snap.phase = infer_phase(snap.snapshot_date, snap.ead_date);
    } else if (f[3] == "before") {
      snap.phase = Phase::BeforeEAD;
    } else if (f[3] == "on") {
      snap.phase = Phase::OnEAD;
    } else if (f[3] == "after") {
      snap.phase = Phase::AfterEAD;
    } else {
      throw MalformedRow(ctx + ": phase must be before/on/after or empty, got '" +
                         f[3] + "'");
    }
    snap.expiry_days = parse_int(f[4], ctx);
    snap.spot = parse_double(f[5], ctx);
    snap.rate = f[6].empty() ? 0.0 : parse_double(f[6], ctx);
    IvObservation obs;
    obs.moneyness = parse_double(f[7], ctx);
    obs.iv = parse_double(f[8], ctx);

    GroupKey key{snap.ticker, serial_day(snap.snapshot_date),
                 serial_day(snap.ead_date)};
    auto it = index.find(key);
    if (it == index.end()) {
      snap.observations.push_back(obs);
      index.emplace(key, out.size());
      out.push_back(std::move(snap));
    } else {
      ChainSnapshot& dst = out[it->second];
      if (dst.phase != snap.phase || dst.expiry_days != snap.expiry_days ||
          dst.spot != snap.spot || dst.rate != snap.rate) {
        throw MalformedRow(ctx +
                           ": snapshot metadata disagrees with earlier rows of "
                           "the same (ticker, snapshot_date, ead_date) group");
      }
      dst.observations.push_back(obs);
    }
  }
  if (out.empty()) throw EmptyFile(name + ": no data rows");

  for (auto& snap : out) {
    std::stable_sort(snap.observations.begin(), snap.observations.end(),
                     [](const IvObservation& a, const IvObservation& b) {
                       return a.moneyness < b.moneyness;
                     });
    validate_snapshot(snap, name + " [" + snap.ticker + " " +
                                format_date(snap.snapshot_date) + "]");
  }
  return out;
}

std::vector<ChainSnapshot> parse_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_snapshot_csv(in, path);
}

std::string serialize_snapshots(const std::vector<ChainSnapshot>& snapshots) {
  std::ostringstream out;
  out << kHeader << "\n";
  for (const auto& snap : snapshots) {
    for (const auto& o : snap.observations) {
      out << snap.ticker << ',' << format_date(snap.snapshot_date) << ','
          << format_date(snap.ead_date) << ',' << phase_name(snap.phase) << ','
          << snap.expiry_days << ',' << shortest(snap.spot) << ','
          << shortest(snap.rate) << ',' << shortest(o.moneyness) << ','
          << shortest(o.iv) << "\n";
    }
  }
  return out.str();
}

GroupedStudies group_event_studies(const std::vector<ChainSnapshot>& snapshots) {
  struct Slot {
    std::optional<ChainSnapshot> before, on, after;
  };
  std::map<std::pair<std::string, long long>, Slot> groups;
  for (const auto& snap : snapshots) {
    Slot& slot = groups[{snap.ticker, serial_day(snap.ead_date)}];
    std::optional<ChainSnapshot>* dst = nullptr;
    switch (snap.phase) {
      case Phase::BeforeEAD: dst = &slot.before; break;
      case Phase::OnEAD: dst = &slot.on; break;
      case Phase::AfterEAD: dst = &slot.after; break;
    }
    if (dst->has_value()) {
      throw AmbiguousPhase("two '" + phase_name(snap.phase) +
                           "' snapshots for " + snap.ticker + " EAD " +
                           format_date(snap.ead_date));
    }
    *dst = snap;
  }

  GroupedStudies out;
  for (auto& [key, slot] : groups) {
    Date ead{};
    if (slot.before) ead = slot.before->ead_date;
    else if (slot.on) ead = slot.on->ead_date;
    else ead = slot.after->ead_date;
    if (slot.before && slot.after) {
      EventStudy study;
      study.ticker = key.first;
      study.quarter = quarter_label(ead);
      study.before = std::move(*slot.before);
      study.on = std::move(slot.on);
      study.after = std::move(*slot.after);
      out.studies.push_back(std::move(study));
    } else {
      std::string missing;
      if (!slot.before) missing = "before";
      if (!slot.after) missing += missing.empty() ? "after" : "+after";
      out.incomplete.push_back({key.first, ead, missing});
    }
  }
  // std::map iteration already sorts by (ticker, ead serial); quarter order
  // follows ead order within a ticker, so no second sort is needed.
  return out;
}

}  // namespace evrisk

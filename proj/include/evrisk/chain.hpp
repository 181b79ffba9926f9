#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evrisk/date.hpp"

namespace evrisk {

/// One quoted point of the smile: moneyness = strike/spot, iv as an
/// annualized fraction (0.75 = 75%).
struct IvObservation {
  double moneyness = 0.0;
  double iv = 0.0;
};

enum class Phase { BeforeEAD, OnEAD, AfterEAD };

[[nodiscard]] std::string phase_name(Phase p);

/// All quotes for one (ticker, snapshot date) chain at a single expiry.
/// Invariants: >= 3 observations, strictly increasing moneyness,
/// expiry_days >= 1, phase consistent with snapshot_date vs ead_date.
struct ChainSnapshot {
  std::string ticker;
  Date snapshot_date;
  Date ead_date;
  Phase phase = Phase::BeforeEAD;
  int expiry_days = 0;
  double spot = 0.0;
  double rate = 0.0;
  std::vector<IvObservation> observations;

  [[nodiscard]] double tau() const { return expiry_days / 365.0; }
};

/// Before/after (optionally on) snapshots around one announcement.
struct EventStudy {
  std::string ticker;
  std::string quarter;
  ChainSnapshot before;
  std::optional<ChainSnapshot> on;
  ChainSnapshot after;
};

/// Group lacking a before or after snapshot; reported, never silently dropped.
struct IncompleteGroup {
  std::string ticker;
  Date ead_date;
  std::string missing;  // "before", "after", or "before+after"
};

struct GroupedStudies {
  std::vector<EventStudy> studies;
  std::vector<IncompleteGroup> incomplete;
};

/// Throws InvariantViolation naming the first violated ChainSnapshot
/// invariant, with `context` prefixed to the message.
void validate_snapshot(const ChainSnapshot& snap, const std::string& context);

/// Parses the snapshot CSV schema (see README). Rows sharing
/// (ticker, snapshot_date, ead_date) form one snapshot; observations are
/// sorted by moneyness. `name` labels error messages only.
[[nodiscard]] std::vector<ChainSnapshot> parse_snapshot_csv(
    std::istream& in, const std::string& name);

[[nodiscard]] std::vector<ChainSnapshot> parse_snapshot_file(
    const std::string& path);

/// Inverse of parsing: emits the same CSV schema, one row per observation.
/// parse(serialize(x)) == x field-for-field.
[[nodiscard]] std::string serialize_snapshots(
    const std::vector<ChainSnapshot>& snapshots);

/// Groups snapshots by (ticker, ead_date) into event studies.
/// Throws AmbiguousPhase on duplicate (ticker, ead_date, phase).
/// Studies are sorted by (ticker, quarter); incomplete groups likewise.
[[nodiscard]] GroupedStudies group_event_studies(
    const std::vector<ChainSnapshot>& snapshots);

}  // namespace evrisk

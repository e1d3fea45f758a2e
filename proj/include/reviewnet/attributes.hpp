#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reviewnet/identity.hpp"
#include "reviewnet/util.hpp"

namespace reviewnet {

// nullopt means no organization could be derived from any e-mail domain.
using Affiliation = std::optional<std::string>;

inline constexpr std::string_view kUnaffiliatedLabel = "unaffiliated";

std::string_view affiliation_label(const Affiliation& affiliation);

// Lowercased e-mail domain -> organization name.
struct AffiliationMap {
  std::map<std::string, std::string> domain_to_org;
};

// Tab-separated map file: "domain\torganization"; '#' starts a comment.
// Lines with an empty organization are counted and skipped.
AffiliationMap parse_affiliation_map(std::istream& in, Diagnostics& diag);

// Persons holding a maintainer role at any point inside one window.
struct MaintainerSet {
  std::string window;
  std::set<PersonId> members;

  bool contains(PersonId id) const { return members.count(id) != 0; }
};

// Raw inputs for one window: the maintainers file at the window's first
// revision plus every line added to it during the window.
struct MaintainerHistory {
  std::string snapshot;
  std::vector<std::string> added_lines;
};

// Reads <window>.snapshot and <window>.added from a directory; missing files
// read as empty.
MaintainerHistory load_maintainer_history(const std::filesystem::path& dir,
                                          std::string_view window);

// A person is a member iff any of its alias names occurs as a
// case-insensitive substring of the snapshot or of any added line.
MaintainerSet extract_maintainers(std::string_view first_snapshot,
                                  const std::vector<std::string>& added_lines,
                                  const IdentityTable& identities, std::string window,
                                  Diagnostics& diag);

// Domain of the e-mail, lowercased; the registrable last-two-labels form is
// looked up first, then the full domain. No '@' yields unaffiliated plus a
// warning.
Affiliation extract_affiliation(std::string_view email, const AffiliationMap& map,
                                Diagnostics* diag = nullptr);

// Majority vote over the e-mails a person used inside one window (keyed
// e-mail -> occurrence count). Unaffiliated votes lose to any organization
// vote; ties break to the lexicographically smallest organization.
Affiliation assign_person_affiliation(const std::map<std::string, std::uint64_t>& window_emails,
                                      const AffiliationMap& map);

// Node attributes for one window: maintainership is global across
// subsystems, affiliation is indexed by person id.
struct WindowAttributes {
  std::string window;
  MaintainerSet maintainers;
  std::vector<Affiliation> affiliation_by_person;

  const Affiliation& affiliation(PersonId id) const;
};

}  // namespace reviewnet

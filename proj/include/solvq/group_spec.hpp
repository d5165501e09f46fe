#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace solvq {

enum class GroupFamilyKind {
  cyclic,
  dihedral,
  quaternion8,
  symmetric,
  unitriangular,
  direct_product,
  table,
};

std::string_view family_name(GroupFamilyKind kind);

/// Declarative description of a test group. Encoding rules per family are
/// documented in docs/FORMATS.md.
struct GroupSpec {
  GroupFamilyKind family = GroupFamilyKind::cyclic;
  /// cyclic: {q}; dihedral: {q}; symmetric: {t}; unitriangular: {dim, p}.
  std::vector<std::uint64_t> params;
  /// direct_product only, first factor in the most significant bits.
  std::vector<GroupSpec> factors;
  /// table only: row i, column j holds the index of element i*j.
  std::vector<std::vector<std::uint32_t>> table;

  static GroupSpec cyclic(std::uint64_t q);
  static GroupSpec dihedral(std::uint64_t q);
  static GroupSpec quaternion8();
  static GroupSpec symmetric(std::uint64_t t);
  static GroupSpec unitriangular(std::uint64_t dim, std::uint64_t p);
  static GroupSpec direct_product(std::vector<GroupSpec> factors);
  static GroupSpec from_table(std::vector<std::vector<std::uint32_t>> table);

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Parses the JSON group spec format. Throws BadSpec on any malformed input.
GroupSpec parse_group_spec(std::string_view text);
GroupSpec load_group_spec(const std::filesystem::path& path);
std::string to_json(const GroupSpec& spec);

}  // namespace solvq

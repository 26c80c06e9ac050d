#pragma once

#include "boundkde/boundary_kernels.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace boundkde {

enum class FamilyMode
{
  iso,
  ani
};

FamilyMode parse_family_mode(const std::string& s);
std::string to_string(FamilyMode mode);

//! Parameters of the candidate family H_n: sample size, dimension, the
//! exponent c of the (log n)^c volume floor and the family mode. In ani mode
//! `orders` holds the kernel orders M_i of the fixed kernel W°; when left
//! empty every M_i defaults to 2.
struct FamilyConfig
{
  std::int64_t n = 2;
  std::size_t d = 1;
  double c = 1.0;
  FamilyMode mode = FamilyMode::iso;
  std::vector<int> orders;

  //! Throws InvalidArgument when n < 2, d < 1, c <= 0 or the orders have the
  //! wrong length.
  void validate() const;

  //! Orders of W° with defaults applied (ani mode).
  std::vector<int> resolved_orders() const;

  friend bool operator==(const FamilyConfig&, const FamilyConfig&) = default;
};

//! Index of a family member: one entry in iso mode, d entries in ani mode.
struct FamilyIndex
{
  std::vector<int> ell;

  friend auto operator<=>(const FamilyIndex&, const FamilyIndex&) = default;
  friend bool operator==(const FamilyIndex&, const FamilyIndex&) = default;
};

//! Coordinatewise minimum.
FamilyIndex index_min(const FamilyIndex& a, const FamilyIndex& b);

//! exp(-sqrt(log n)).
double h_star(std::int64_t n);

//! Integer part of log(n) / (2 ell) + 1/2.
int m_of_ell(std::int64_t n, int ell);

//! Bandwidth vector h(ell) of an index (length d).
std::vector<double> index_bandwidth(const FamilyConfig& cfg, const FamilyIndex& idx);

//! True when h(ell) lies in H_n: every h_i <= h_n* and n V_h >= (log n)^c.
bool in_family(const FamilyConfig& cfg, const FamilyIndex& idx);

//! Ascending iso indices. Throws EmptyFamily when none qualifies.
std::vector<FamilyIndex> iso_index_set(const FamilyConfig& cfg);

//! Lexicographically ordered ani indices. Throws EmptyFamily when none
//! qualifies.
std::vector<FamilyIndex> ani_index_set(const FamilyConfig& cfg);

//! Dispatches on cfg.mode.
std::vector<FamilyIndex> index_set(const FamilyConfig& cfg);

//! Kernels and bandwidth of family member idx. Throws IndexNotInFamily.
ProductKernelSpec family_member(const FamilyConfig& cfg, const FamilyIndex& idx);

//! Kernel orders of member idx, one per coordinate.
std::vector<int> member_orders(const FamilyConfig& cfg, const FamilyIndex& idx);

} // namespace boundkde

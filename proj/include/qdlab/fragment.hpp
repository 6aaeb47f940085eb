#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdlab/density_matrix.hpp"

namespace qdlab {

enum class TraceMethod { Perez, Staircase };

std::string to_string(TraceMethod method);

/// A chosen part of the environment.
///
/// Perez: `members` are environment levels in {0..N-1} and the fragment
/// state keeps exactly those rows/columns. Staircase: `members` are
/// subenvironment indices in {1..N-1}, level k being the single excitation
/// of subenvironment k; the fragment state lives on the compact basis
/// {0} u members.
struct FragmentSelection {
  TraceMethod method = TraceMethod::Perez;
  std::vector<int> members;  // sorted, unique
  int env_levels = 0;        // N of the parent state

  /// |members| / N for Perez, |members| / (N-1) for Staircase: each method's
  /// natural unit of "one subenvironment".
  double fraction() const;

  /// Number of selectable units: N (Perez) or N-1 (Staircase).
  int cardinality() const;

  /// Sorted-unique members within range, else throws std::invalid_argument.
  void validate() const;
};

/// Level-partitioning-and-elimination reduction: keeps the block with both
/// environment indices in the selection and renormalizes by the kept
/// diagonal weight. A weightless block (kept weight <= 1e-12) yields the
/// zero state; that is a defined value, not an error.
DensityMatrix perez_trace(const DensityMatrix& rho_se, const FragmentSelection& fragment);

/// Staircase-subenvironment reduction: keeps the block over {0} u members
/// and deposits the diagonal weight of every traced-out excited level onto
/// the ground element. An exact partial trace on the compact single-
/// excitation subspace; preserves the trace and the reduced system state.
DensityMatrix staircase_trace(const DensityMatrix& rho_se, const FragmentSelection& fragment);

/// Dispatch on fragment.method.
DensityMatrix apply_trace(const DensityMatrix& rho_se, const FragmentSelection& fragment);

/// All C(cardinality, k) selections of size k in lexicographic order.
std::vector<FragmentSelection> enumerate_fragments(TraceMethod method, int n_levels, int k);

/// Selections of size k for a sweep: exhaustive when N < 16 or when the
/// count does not exceed sample_count, otherwise sample_count independent
/// uniform draws (duplicates possible, deterministic in the seed).
std::vector<FragmentSelection> fragments_for_sweep(TraceMethod method, int n_levels, int k,
                                                   int sample_count, std::uint64_t seed);

}  // namespace qdlab

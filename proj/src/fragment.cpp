#include "qdlab/fragment.hpp"

#include <algorithm>
#include <stdexcept>

#include "qdlab/rng.hpp"

namespace qdlab {

namespace {

constexpr double kZeroWeight = 1e-12;

void require_joint_qubit_env(const DensityMatrix& rho) {
  if (rho.dims().size() != 2 || rho.dims()[0] != 2) {
    throw std::invalid_argument("fragment traces expect a state with dims {2, N}");
  }
}

}  // namespace

std::string to_string(TraceMethod method) {
  return method == TraceMethod::Perez ? "perez" : "staircase";
}

double FragmentSelection::fraction() const {
  const int units = cardinality();
  return units == 0 ? 0.0 : static_cast<double>(members.size()) / units;
}

int FragmentSelection::cardinality() const {
  return method == TraceMethod::Perez ? env_levels : env_levels - 1;
}

void FragmentSelection::validate() const {
  if (env_levels < 2) throw std::invalid_argument("FragmentSelection: env_levels must be >= 2");
  const int lo = method == TraceMethod::Perez ? 0 : 1;
  int prev = -1;
  for (int m : members) {
    if (m < lo || m >= env_levels) {
      throw std::invalid_argument("FragmentSelection: member " + std::to_string(m) +
                                  " out of range");
    }
    if (m <= prev) {
      throw std::invalid_argument("FragmentSelection: members must be sorted and unique");
    }
    prev = m;
  }
}

DensityMatrix perez_trace(const DensityMatrix& rho_se, const FragmentSelection& fragment) {
  require_joint_qubit_env(rho_se);
  if (fragment.method != TraceMethod::Perez) {
    throw std::invalid_argument("perez_trace: selection method mismatch");
  }
  fragment.validate();
  const int n = rho_se.dims()[1];
  if (fragment.env_levels != n) {
    throw std::invalid_argument("perez_trace: selection size does not match state");
  }

  const int nk = static_cast<int>(fragment.members.size());
  const std::vector<int> out_dims{2, std::max(nk, 1)};
  if (nk == 0) return DensityMatrix::zero(out_dims, rho_se.tolerance());

  const cmatrix& m = rho_se.matrix();
  cmatrix block(2 * nk, 2 * nk);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) {
          block(i * nk + a, j * nk + b) = m(i * n + fragment.members[a], j * n + fragment.members[b]);
        }
      }
    }
  }

  const double weight = block.trace().real();
  if (weight <= kZeroWeight) return DensityMatrix::zero(out_dims, rho_se.tolerance());
  return DensityMatrix(out_dims, block / weight, rho_se.tolerance());
}

DensityMatrix staircase_trace(const DensityMatrix& rho_se, const FragmentSelection& fragment) {
  require_joint_qubit_env(rho_se);
  if (fragment.method != TraceMethod::Staircase) {
    throw std::invalid_argument("staircase_trace: selection method mismatch");
  }
  fragment.validate();
  const int n = rho_se.dims()[1];
  if (fragment.env_levels != n) {
    throw std::invalid_argument("staircase_trace: selection size does not match state");
  }

  // Kept environment basis: ground level then the selected excitations.
  std::vector<int> kept{0};
  kept.insert(kept.end(), fragment.members.begin(), fragment.members.end());
  const int nk = static_cast<int>(kept.size());

  std::vector<bool> is_kept(static_cast<std::size_t>(n), false);
  for (int level : kept) is_kept[static_cast<std::size_t>(level)] = true;

  const cmatrix& m = rho_se.matrix();
  cmatrix out(2 * nk, 2 * nk);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) {
          out(i * nk + a, j * nk + b) = m(i * n + kept[a], j * n + kept[b]);
        }
      }
      // Traced-out excitations land on the ground-ground element.
      complexd dumped(0.0, 0.0);
      for (int level = 1; level < n; ++level) {
        if (!is_kept[static_cast<std::size_t>(level)]) dumped += m(i * n + level, j * n + level);
      }
      out(i * nk, j * nk) += dumped;
    }
  }
  return DensityMatrix({2, nk}, std::move(out), rho_se.tolerance());
}

DensityMatrix apply_trace(const DensityMatrix& rho_se, const FragmentSelection& fragment) {
  return fragment.method == TraceMethod::Perez ? perez_trace(rho_se, fragment)
                                               : staircase_trace(rho_se, fragment);
}

std::vector<FragmentSelection> enumerate_fragments(TraceMethod method, int n_levels, int k) {
  if (n_levels < 2) throw std::invalid_argument("enumerate_fragments: n_levels must be >= 2");
  const int lo = method == TraceMethod::Perez ? 0 : 1;
  const int units = method == TraceMethod::Perez ? n_levels : n_levels - 1;
  if (k < 0 || k > units) {
    throw std::invalid_argument("enumerate_fragments: size " + std::to_string(k) +
                                " out of range [0, " + std::to_string(units) + "]");
  }

  std::vector<FragmentSelection> out;
  std::vector<int> combo(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = lo + i;
  while (true) {
    out.push_back(FragmentSelection{method, combo, n_levels});
    // Next combination in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == lo + units - k + pos) --pos;
    if (pos < 0) break;
    ++combo[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) {
      combo[static_cast<std::size_t>(i)] = combo[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return out;
}

std::vector<FragmentSelection> fragments_for_sweep(TraceMethod method, int n_levels, int k,
                                                   int sample_count, std::uint64_t seed) {
  const int units = method == TraceMethod::Perez ? n_levels : n_levels - 1;
  if (k < 0 || k > units) {
    throw std::invalid_argument("fragments_for_sweep: size out of range");
  }
  double count = 1.0;
  for (int i = 0; i < k; ++i) count *= static_cast<double>(units - i) / (i + 1);
  if (n_levels < 16 || count <= sample_count) return enumerate_fragments(method, n_levels, k);

  // Uniform subsets via partial Fisher-Yates over the unit indices.
  const int lo = method == TraceMethod::Perez ? 0 : 1;
  std::vector<FragmentSelection> out;
  out.reserve(static_cast<std::size_t>(sample_count));
  SplitMix64 rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(units));
  for (int s = 0; s < sample_count; ++s) {
    for (int i = 0; i < units; ++i) pool[static_cast<std::size_t>(i)] = lo + i;
    std::vector<int> members(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(units - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      members[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    std::sort(members.begin(), members.end());
    out.push_back(FragmentSelection{method, std::move(members), n_levels});
  }
  return out;
}

}  // namespace qdlab

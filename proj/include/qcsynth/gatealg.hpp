// Copyright 2026 The qcsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcsynth/errors.hpp"

/// Dense few-qubit linear algebra used by every environment.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
/// basis index: for two qubits the basis order is |q0 q1> = 00, 01, 10, 11.
/// Under this convention CNOT(0->1) * (H (x) I) is the Bell-pair circuit.
namespace qcsynth::gatealg {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 4;

enum class GateKind : std::uint8_t { H, T, S, X, Z, CNOT, CP, CPinv };

/// A named gate, optionally conjugate-transposed.
struct Gate {
  GateKind kind = GateKind::H;
  bool dagger = false;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Number of qubits the gate acts on (1 or 2).
int arity(GateKind kind);

/// True when the gate equals its own inverse (H, X, Z, CNOT).
bool is_self_inverse(GateKind kind);

/// Parses "H", "T", "S", "X", "Z", "CNOT", "CP", "CPinv" (case-insensitive).
/// An optional trailing "dg" / "^-1" sets the dagger flag.
/// Throws ConfigError on anything else.
Gate parse_gate(std::string_view name);

std::string_view kind_name(GateKind kind);

/// A gate bound to concrete qubit slots. Two-qubit gates list
/// [control, target].
struct GatePlacement {
  Gate gate;
  std::vector<int> qubits;

  friend bool operator==(const GatePlacement&, const GatePlacement&) = default;
};

GatePlacement place(GateKind kind, std::initializer_list<int> qubits);

/// The same placement with the dagger flag toggled.
GatePlacement inverse(const GatePlacement& placement);

/// Compact label such as "H0", "CNOT01", "T1^-1", "CP10^-1".
///
/// The "^-1" suffix is shown when exactly one of (kind == CPinv, dagger) holds,
/// so the inverse of CPinv on (1,0) prints as "CP10".
std::string label(const GatePlacement& placement);

class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;

  /// Row-major entries; `entries.size()` must be 4^n_qubits.
  UnitaryMatrix(int n_qubits, std::vector<Complex> entries);

  static UnitaryMatrix identity(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }

  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim() + col];
  }
  Complex& operator()(std::size_t row, std::size_t col) {
    return entries_[row * dim() + col];
  }

  std::span<const Complex> entries() const { return entries_; }

  /// Frobenius norm of U U^dagger - I.
  double unitarity_error() const;

  UnitaryMatrix scaled(Complex factor) const;

 private:
  int n_qubits_ = 0;
  std::vector<Complex> entries_;
};

class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  /// Computational basis state |index>, index read with qubit 0 as MSB.
  static StateVector basis(int n_qubits, std::size_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }

  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  Complex& operator[](std::size_t i) { return amplitudes_[i]; }

  std::span<const Complex> amplitudes() const { return amplitudes_; }

  double norm() const;

  StateVector scaled(Complex factor) const;

 private:
  int n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

/// 2x2 or 4x4 matrix of the named gate. The dagger flag returns the conjugate
/// transpose.
UnitaryMatrix base_gate_matrix(Gate gate);

/// Lifts a placed gate to the full 2^n register by direct basis-index
/// construction, so reversed and non-adjacent qubit pairs need no swaps.
UnitaryMatrix embed(const GatePlacement& placement, int n_qubits);

/// A * S, i.e. `action` applied after the accumulated circuit `state`.
UnitaryMatrix compose(const UnitaryMatrix& action, const UnitaryMatrix& state);

StateVector apply(const UnitaryMatrix& u, const StateVector& psi);

UnitaryMatrix dagger(const UnitaryMatrix& u);

/// Product of a gate list executed left to right in time:
/// circuit_unitary({g1, g2}) = g2 * g1.
UnitaryMatrix circuit_unitary(std::span<const GatePlacement> circuit, int n_qubits);

/// |Tr(current^dagger target)| / 2^n.
double trace_fidelity(const UnitaryMatrix& current, const UnitaryMatrix& target);

/// |<current|target>|^2.
double state_overlap(const StateVector& current, const StateVector& target);

/// Largest entrywise magnitude of a - b.
double max_abs_diff(const UnitaryMatrix& a, const UnitaryMatrix& b);
double max_abs_diff(const StateVector& a, const StateVector& b);

/// Phase-normalized, rounded key for deduplicating states.
class Fingerprint {
 public:
  Fingerprint() = default;

  const std::vector<std::int64_t>& cells() const { return cells_; }

  /// Deterministic text form, e.g. "U2:1,0,0,0,...".
  std::string to_string() const;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  friend Fingerprint fingerprint(const UnitaryMatrix&, double);
  friend Fingerprint fingerprint(const StateVector&, double);

  char tag_ = 'U';
  int n_qubits_ = 0;
  std::vector<std::int64_t> cells_;
  std::size_t hash_ = 0;

  friend struct FingerprintHash;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& fp) const noexcept { return fp.hash_; }
};

inline constexpr double kDefaultFingerprintTol = 1e-6;

/// Rotates away the global phase (first entry with magnitude > tol becomes
/// positive real), then rounds re/im of each entry to a multiple of tol.
/// Throws std::invalid_argument for tol <= 0 or an all-zero input.
Fingerprint fingerprint(const UnitaryMatrix& u, double tol = kDefaultFingerprintTol);
Fingerprint fingerprint(const StateVector& psi, double tol = kDefaultFingerprintTol);

}  // namespace qcsynth::gatealg

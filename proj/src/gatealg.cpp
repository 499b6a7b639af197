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

#include "qcsynth/gatealg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qcsynth::gatealg {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(n_qubits));
  }
}

void require_same_dims(int a, int b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) +
                                " qubits)");
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

int bit_of(std::size_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1U);
}

std::size_t mix(std::size_t seed, std::uint64_t v) {
  // splitmix64 finalizer folded into a running hash
  v += 0x9e3779b97f4a7c15ULL + seed;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(v ^ (v >> 31));
}

std::vector<std::int64_t> quantize(std::span<const Complex> values, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("fingerprint tolerance must be > 0");
  auto pivot = std::find_if(values.begin(), values.end(),
                            [tol](const Complex& z) { return std::abs(z) > tol; });
  if (pivot == values.end()) {
    throw std::invalid_argument("cannot fingerprint an all-zero state");
  }
  const Complex phase = std::conj(*pivot) / std::abs(*pivot);
  std::vector<std::int64_t> cells;
  cells.reserve(values.size() * 2);
  for (const Complex& z : values) {
    const Complex w = z * phase;
    // llround(-0.0) is 0, so signed zeros collapse.
    cells.push_back(std::llround(w.real() / tol));
    cells.push_back(std::llround(w.imag() / tol));
  }
  return cells;
}

}  // namespace

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::CP:
    case GateKind::CPinv:
      return 2;
    default:
      return 1;
  }
}

bool is_self_inverse(GateKind kind) {
  return kind == GateKind::H || kind == GateKind::X || kind == GateKind::Z ||
         kind == GateKind::CNOT;
}

std::string_view kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::S: return "S";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CP: return "CP";
    case GateKind::CPinv: return "CPinv";
  }
  return "?";
}

Gate parse_gate(std::string_view name) {
  std::string key = lower(name);
  bool dagger = false;
  for (std::string_view suffix : {"^-1", "dg", "^dagger"}) {
    if (key.size() > suffix.size() && key.ends_with(suffix)) {
      key.resize(key.size() - suffix.size());
      dagger = true;
      break;
    }
  }
  static constexpr std::pair<std::string_view, GateKind> kNames[] = {
      {"h", GateKind::H},    {"t", GateKind::T},       {"s", GateKind::S},
      {"x", GateKind::X},    {"z", GateKind::Z},       {"cnot", GateKind::CNOT},
      {"cx", GateKind::CNOT}, {"cp", GateKind::CP},    {"cpinv", GateKind::CPinv},
  };
  for (const auto& [n, kind] : kNames) {
    if (key == n) return Gate{kind, dagger};
  }
  throw ConfigError("unknown gate name '" + std::string(name) + "'");
}

GatePlacement place(GateKind kind, std::initializer_list<int> qubits) {
  return GatePlacement{Gate{kind, false}, std::vector<int>(qubits)};
}

GatePlacement inverse(const GatePlacement& placement) {
  GatePlacement out = placement;
  out.gate.dagger = !out.gate.dagger;
  return out;
}

std::string label(const GatePlacement& placement) {
  const GateKind kind = placement.gate.kind;
  std::string out(kind == GateKind::CPinv ? "CP" : kind_name(kind));
  for (int q : placement.qubits) out += std::to_string(q);
  const bool inverted = (kind == GateKind::CPinv) != placement.gate.dagger;
  if (inverted) out += "^-1";
  return out;
}

// ---------------------------------------------------------------------------

UnitaryMatrix::UnitaryMatrix(int n_qubits, std::vector<Complex> entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  require_qubit_count(n_qubits);
  if (entries_.size() != dim() * dim()) {
    throw std::invalid_argument("matrix entry count does not match 4^n");
  }
  for (const Complex& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("matrix entries must be finite");
    }
  }
}

UnitaryMatrix UnitaryMatrix::identity(int n_qubits) {
  require_qubit_count(n_qubits);
  const std::size_t d = std::size_t{1} << n_qubits;
  std::vector<Complex> e(d * d);
  for (std::size_t i = 0; i < d; ++i) e[i * d + i] = 1.0;
  return UnitaryMatrix(n_qubits, std::move(e));
}

double UnitaryMatrix::unitarity_error() const {
  const std::size_t d = dim();
  double sum = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += (*this)(r, k) * std::conj((*this)(c, k));
      if (r == c) acc -= 1.0;
      sum += std::norm(acc);
    }
  }
  return std::sqrt(sum);
}

UnitaryMatrix UnitaryMatrix::scaled(Complex factor) const {
  std::vector<Complex> e = entries_;
  for (Complex& z : e) z *= factor;
  return UnitaryMatrix(n_qubits_, std::move(e));
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  require_qubit_count(n_qubits);
  if (amplitudes_.size() != dim()) {
    throw std::invalid_argument("state amplitude count does not match 2^n");
  }
  for (const Complex& z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("state amplitudes must be finite");
    }
  }
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  require_qubit_count(n_qubits);
  const std::size_t d = std::size_t{1} << n_qubits;
  if (index >= d) throw std::out_of_range("basis index out of range");
  std::vector<Complex> a(d);
  a[index] = 1.0;
  return StateVector(n_qubits, std::move(a));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& z : amplitudes_) s += std::norm(z);
  return std::sqrt(s);
}

StateVector StateVector::scaled(Complex factor) const {
  std::vector<Complex> a = amplitudes_;
  for (Complex& z : a) z *= factor;
  return StateVector(n_qubits_, std::move(a));
}

// ---------------------------------------------------------------------------

UnitaryMatrix base_gate_matrix(Gate gate) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex t_phase = std::polar(1.0, std::numbers::pi / 4.0);
  UnitaryMatrix m;
  switch (gate.kind) {
    case GateKind::H: m = UnitaryMatrix(1, {r, r, r, -r}); break;
    case GateKind::T: m = UnitaryMatrix(1, {1.0, 0.0, 0.0, t_phase}); break;
    case GateKind::S: m = UnitaryMatrix(1, {1.0, 0.0, 0.0, kI}); break;
    case GateKind::X: m = UnitaryMatrix(1, {0.0, 1.0, 1.0, 0.0}); break;
    case GateKind::Z: m = UnitaryMatrix(1, {1.0, 0.0, 0.0, -1.0}); break;
    case GateKind::CNOT:
      m = UnitaryMatrix(2, {1, 0, 0, 0,
                            0, 1, 0, 0,
                            0, 0, 0, 1,
                            0, 0, 1, 0});
      break;
    case GateKind::CP:
    case GateKind::CPinv: {
      m = UnitaryMatrix::identity(2);
      m(3, 3) = gate.kind == GateKind::CP ? kI : -kI;
      break;
    }
    default:
      throw ConfigError("unknown gate kind");
  }
  return gate.dagger ? dagger(m) : m;
}

UnitaryMatrix embed(const GatePlacement& placement, int n_qubits) {
  require_qubit_count(n_qubits);
  const int k = arity(placement.gate.kind);
  if (static_cast<int>(placement.qubits.size()) != k) {
    throw std::invalid_argument(label(placement) + ": expected " + std::to_string(k) +
                                " qubit index(es)");
  }
  for (std::size_t i = 0; i < placement.qubits.size(); ++i) {
    const int q = placement.qubits[i];
    if (q < 0 || q >= n_qubits) {
      throw std::out_of_range(label(placement) + ": qubit " + std::to_string(q) +
                              " out of range for " + std::to_string(n_qubits) +
                              "-qubit register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (placement.qubits[j] == q) {
        throw std::invalid_argument(label(placement) + ": repeated qubit index");
      }
    }
  }

  const UnitaryMatrix g = base_gate_matrix(placement.gate);
  std::size_t touched = 0;
  for (int q : placement.qubits) touched |= std::size_t{1} << (n_qubits - 1 - q);

  UnitaryMatrix out(n_qubits, std::vector<Complex>((std::size_t{1} << n_qubits) *
                                                   (std::size_t{1} << n_qubits)));
  const std::size_t d = out.dim();
  auto local = [&](std::size_t index) {
    std::size_t sub = 0;
    for (int q : placement.qubits) sub = (sub << 1) | bit_of(index, q, n_qubits);
    return sub;
  };
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if ((r & ~touched) != (c & ~touched)) continue;
      out(r, c) = g(local(r), local(c));
    }
  }
  return out;
}

UnitaryMatrix compose(const UnitaryMatrix& action, const UnitaryMatrix& state) {
  require_same_dims(action.n_qubits(), state.n_qubits(), "compose");
  const std::size_t d = action.dim();
  std::vector<Complex> e(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex a = action(r, k);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) e[r * d + c] += a * state(k, c);
    }
  }
  return UnitaryMatrix(action.n_qubits(), std::move(e));
}

StateVector apply(const UnitaryMatrix& u, const StateVector& psi) {
  require_same_dims(u.n_qubits(), psi.n_qubits(), "apply");
  const std::size_t d = u.dim();
  std::vector<Complex> out(d);
  for (std::size_t r = 0; r < d; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) acc += u(r, c) * psi[c];
    out[r] = acc;
  }
  return StateVector(u.n_qubits(), std::move(out));
}

UnitaryMatrix dagger(const UnitaryMatrix& u) {
  const std::size_t d = u.dim();
  std::vector<Complex> e(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) e[c * d + r] = std::conj(u(r, c));
  }
  return UnitaryMatrix(u.n_qubits(), std::move(e));
}

UnitaryMatrix circuit_unitary(std::span<const GatePlacement> circuit, int n_qubits) {
  UnitaryMatrix acc = UnitaryMatrix::identity(n_qubits);
  for (const GatePlacement& g : circuit) acc = compose(embed(g, n_qubits), acc);
  return acc;
}

double trace_fidelity(const UnitaryMatrix& current, const UnitaryMatrix& target) {
  require_same_dims(current.n_qubits(), target.n_qubits(), "trace_fidelity");
  const std::size_t d = current.dim();
  // Tr(A^dagger B) = sum_{r,c} conj(A_rc) B_rc
  Complex tr = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) tr += std::conj(current(r, c)) * target(r, c);
  }
  return std::abs(tr) / static_cast<double>(d);
}

double state_overlap(const StateVector& current, const StateVector& target) {
  require_same_dims(current.n_qubits(), target.n_qubits(), "state_overlap");
  Complex inner = 0.0;
  for (std::size_t i = 0; i < current.dim(); ++i) inner += std::conj(current[i]) * target[i];
  return std::norm(inner);
}

double max_abs_diff(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  require_same_dims(a.n_qubits(), b.n_qubits(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return m;
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  require_same_dims(a.n_qubits(), b.n_qubits(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------

std::string Fingerprint::to_string() const {
  std::ostringstream os;
  os << tag_ << n_qubits_ << ':';
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (i) os << ',';
    os << cells_[i];
  }
  return os.str();
}

Fingerprint fingerprint(const UnitaryMatrix& u, double tol) {
  Fingerprint fp;
  fp.tag_ = 'U';
  fp.n_qubits_ = u.n_qubits();
  fp.cells_ = quantize(u.entries(), tol);
  std::size_t h = mix(0, static_cast<std::uint64_t>(fp.n_qubits_) * 2);
  for (std::int64_t v : fp.cells_) h = mix(h, static_cast<std::uint64_t>(v));
  fp.hash_ = h;
  return fp;
}

Fingerprint fingerprint(const StateVector& psi, double tol) {
  Fingerprint fp;
  fp.tag_ = 'V';
  fp.n_qubits_ = psi.n_qubits();
  fp.cells_ = quantize(psi.amplitudes(), tol);
  std::size_t h = mix(0, static_cast<std::uint64_t>(fp.n_qubits_) * 2 + 1);
  for (std::int64_t v : fp.cells_) h = mix(h, static_cast<std::uint64_t>(v));
  fp.hash_ = h;
  return fp;
}

}  // namespace qcsynth::gatealg

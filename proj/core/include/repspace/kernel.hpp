#ifndef REPSPACE_KERNEL_HPP
#define REPSPACE_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Sequences, prefixes, the pairing function, and the fueled monotone
// machine model. Everything here is immutable after construction and safe
// to evaluate from multiple threads; laziness is implemented with internal
// memo caches behind mutexes, never with user-visible mutation.

namespace repspace::kernel {

using Nat = std::uint64_t;
using Prefix = std::vector<Nat>;
using PrefixView = std::span<const Nat>;

// --- errors --------------------------------------------------------------

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedLevelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- pairing -------------------------------------------------------------

// Cantor polynomial pairing: <n,i> = (n+i)(n+i+1)/2 + i.
constexpr Nat pairIndex(Nat n, Nat i) { return (n + i) * (n + i + 1) / 2 + i; }

struct IndexPair {
  Nat first, second;
};

IndexPair unpairIndex(Nat code);

// --- prefixes ------------------------------------------------------------

bool isPrefixOf(PrefixView shorter, PrefixView longer);

// --- sequence oracles ----------------------------------------------------

// Total deterministic function N -> N standing for a point of Baire space.
// Fixture form carries an eventually periodic description on which tail
// properties are exactly decidable.
struct EventuallyPeriodic {
  Prefix preperiod;
  Prefix period;  // non-empty
  Nat at(std::size_t i) const {
    if (i < preperiod.size()) return preperiod[i];
    return period[(i - preperiod.size()) % period.size()];
  }
};

class SequenceOracle {
 public:
  using Fn = std::function<Nat(std::size_t)>;

  SequenceOracle();  // all-zero sequence

  static SequenceOracle fromFunction(Fn f);  // f must be pure
  static SequenceOracle memoized(Fn f);      // pure f, values cached
  static SequenceOracle eventuallyPeriodic(Prefix preperiod, Prefix period);
  static SequenceOracle constant(Nat value);
  // Finite prefix followed by zeros.
  static SequenceOracle fromPrefix(Prefix items);

  Nat at(std::size_t i) const;
  Prefix prefix(std::size_t length) const;

  // Non-null exactly when this oracle carries an eventually periodic fixture.
  const EventuallyPeriodic* fixture() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  explicit SequenceOracle(std::shared_ptr<const Impl> impl);
};

// Product name conventions.  Strict 2-way interleaving for binary products,
// pairing-indexed rows for countable ones; both have exact inverses.
SequenceOracle interleaveNames(SequenceOracle p, SequenceOracle q);
SequenceOracle splitName(SequenceOracle pq, int component);  // component 0 or 1

SequenceOracle tupleRows(std::vector<SequenceOracle> rows);  // rows beyond the list are all-zero
SequenceOracle tupleRows(std::function<SequenceOracle(std::size_t)> rows);
SequenceOracle rowOf(SequenceOracle tupled, std::size_t j);

// Head entry followed by a tail name; the coproduct convention.
SequenceOracle consName(Nat head, SequenceOracle tail);
SequenceOracle tailName(SequenceOracle p);

// --- monotone machines ---------------------------------------------------

// A fueled prefix transformer; the realizer model for continuous maps.
//   monotone:      u <= v and m <= n  implies  step(u,m) <= step(v,n)
//   deterministic: equal arguments give equal outputs
//   fuel-bounded:  |step(u,n)| <= n, and only u[0..min(|u|,n)) is readable
// The read bound is enforced structurally: step() trims the input span
// before dispatching to the implementation.
class MonotoneMachine {
 public:
  using StepFn = std::function<Prefix(PrefixView, std::size_t)>;
  // Optional evaluation hint: input entries sufficient to decide emission and
  // values of all output positions < outLen (given enough fuel). Conservative
  // default is "unknown".
  using NeedFn = std::function<std::size_t(std::size_t)>;

  MonotoneMachine();  // identity

  static MonotoneMachine make(std::string descriptor, StepFn step,
                              NeedFn inputNeeded = {});

  Prefix step(PrefixView input, std::size_t fuel) const;
  std::size_t inputNeeded(std::size_t outLen) const;

  // Combinator expression in the textual descriptor grammar; host-code
  // machines (allowed in tests, not in the DSL) describe as "<host:...>".
  const std::string& descriptor() const;
  bool inDsl() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Core combinators (descriptor grammar: id | const(<nat-list>) |
// compose(<m>,<m>) | interleave | split(<0|1>) | delay(<nat>,<m>) |
// table(<name>) | jumplift(<m>) | pwlim(<m>,...)).
MonotoneMachine identityMachine();
MonotoneMachine constantMachine(Prefix values);  // values then zeros
// composeMachines(f, g): run f first, then g on f's output.
MonotoneMachine composeMachines(MonotoneMachine f, MonotoneMachine g);
// Diagonal x -> (x, x) on interleaved product names; grammar name "interleave".
MonotoneMachine diagonalMachine();
MonotoneMachine splitMachine(int component);
// Emits nothing until `gate` input entries (and fuel) are consumed.
MonotoneMachine delayMachine(std::size_t gate, MonotoneMachine inner);
// out(k) = in(perm(k)); emission of position k gated on availability of
// in[perm(j)] for all j <= k.
MonotoneMachine indexPermutationMachine(std::string descriptor,
                                        std::function<std::size_t(std::size_t)> perm);
// Runs `inner` on the interleave of the captured fixture (first component)
// and the live input (second component).
MonotoneMachine partialApplyMachine(MonotoneMachine inner, SequenceOracle captured);

// Feed the length-`fuel` prefix of p to M and look up one output position.
// Absence is a value, not an error; once present the value never changes as
// fuel grows.
std::optional<Nat> runOnOracle(const MonotoneMachine& M, const SequenceOracle& p,
                               std::size_t outIndex, std::size_t fuel);

// Lazy total name of M applied to a total input; queries drive fuel.
// Throws PreconditionError if a position never materializes within the
// internal fuel cap (a non-productive machine is a usage bug).
SequenceOracle outputOracle(MonotoneMachine M, SequenceOracle input);

}  // namespace repspace::kernel

#endif

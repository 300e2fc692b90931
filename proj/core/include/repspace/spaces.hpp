#ifndef REPSPACE_SPACES_HPP
#define REPSPACE_SPACES_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "repspace/kernel.hpp"

// The represented-space layer: space descriptors, fixture points carrying
// ground-truth denotations, the Sierpinski observation protocol, and
// function-space evaluation. Semantic checks (name validity, equality) are
// defined on fixture forms only; general names are opaque.

namespace repspace::spaces {

using kernel::MonotoneMachine;
using kernel::Nat;
using kernel::SequenceOracle;

enum class SpaceTag {
  Nat,
  Sierpinski,
  Two,
  Cantor,
  Baire,
  Product,
  Coproduct,
  Function,
  Open,
  Closed,
  Jump,
  Nabla,
  E0,
};

// Observation level of a set/function space: id-level, a finite jump tower,
// or the finite-mindchange level.
struct Level {
  enum class Kind { Base, Jump, Nabla } kind = Kind::Base;
  std::size_t jumps = 0;  // meaningful for Kind::Jump, >= 1

  static Level base() { return {Kind::Base, 0}; }
  static Level jump(std::size_t k) { return {Kind::Jump, k}; }
  static Level nabla() { return {Kind::Nabla, 0}; }

  bool operator==(const Level&) const = default;
  std::string show() const;
};

class SpaceDescriptor {
 public:
  static SpaceDescriptor nat();
  static SpaceDescriptor sierpinski();
  static SpaceDescriptor two();
  static SpaceDescriptor cantor();
  static SpaceDescriptor baire();
  static SpaceDescriptor e0();
  static SpaceDescriptor product(SpaceDescriptor a, SpaceDescriptor b);
  static SpaceDescriptor coproduct(std::vector<SpaceDescriptor> summands);
  static SpaceDescriptor function(SpaceDescriptor domain, SpaceDescriptor codomain);
  static SpaceDescriptor open(SpaceDescriptor of, Level level = Level::base());
  static SpaceDescriptor closed(SpaceDescriptor of, Level level = Level::base());
  static SpaceDescriptor jump(SpaceDescriptor of);
  static SpaceDescriptor nabla(SpaceDescriptor of);

  SpaceTag tag() const;
  const std::vector<SpaceDescriptor>& children() const;
  Level level() const;

  bool sameAs(const SpaceDescriptor& other) const;
  std::string show() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Ground-truth value a fixture point denotes; which alternative applies is
// determined by the space tag.
using Denotation = std::variant<bool, Nat, SequenceOracle>;

struct SpacePoint {
  SpaceDescriptor space;
  SequenceOracle name;
  std::optional<Denotation> denotation;
  // Host-code escape hatch for function-space points built in tests; when
  // present, evaluation uses it instead of decoding the name.
  std::optional<MonotoneMachine> hostMachine;
};

// --- Sierpinski observation -----------------------------------------------

struct SierpObservation {
  enum class Kind { ObservedTop, NotYetBottom } kind;
  std::size_t step;  // index of the first nonzero entry, or the fuel spent

  bool observed() const { return kind == Kind::ObservedTop; }
};

// Semidecision of "top" by scanning name entries 0..fuel-1 for a nonzero.
SierpObservation observeName(const SequenceOracle& name, std::size_t fuel);
// Same, with the space tag checked.
SierpObservation observe(const SpacePoint& point, std::size_t fuel);

// --- names of simple spaces -------------------------------------------------

SequenceOracle natName(Nat n);                       // 0^n 1 0^w
std::optional<Nat> decodeNatName(const SequenceOracle& name, std::size_t fuel);

SequenceOracle bottomName();                         // 0^w
SequenceOracle topNameAt(std::size_t index);         // first 1 at `index`

// --- function spaces --------------------------------------------------------

// A function-space name is a serialized combinator descriptor: each byte of
// the header text shifted by +1, then a 0 terminator, then a payload stream.
// Plain combinators ignore the payload; a header of the form pstream(<m>)
// runs <m> on the interleave of the payload (first component) with the
// argument (second component), which is what makes currying a machine.
SequenceOracle encodeDescriptorName(const std::string& descriptor);
SequenceOracle encodeDescriptorName(const std::string& descriptor, SequenceOracle payload);
std::string decodeDescriptorHeader(const SequenceOracle& name, std::size_t maxLength = 4096);
SequenceOracle descriptorPayload(const SequenceOracle& name, std::size_t maxLength = 4096);

SpacePoint makeFunctionPoint(SpaceDescriptor domain, SpaceDescriptor codomain,
                             const MonotoneMachine& machine);

// Decodes the function name (or uses the host machine) and interprets it.
MonotoneMachine machineOfFunctionPoint(const SpacePoint& f);

// Descriptor interpretation; lazy, queries drive fuel.
SpacePoint evalFunction(const SpacePoint& f, const SpacePoint& x);

// Type conversion between C(X x Y, Z) and C(X, C(Y, Z)):
// curryName(f) evaluated at x yields the partial application of f, and
// uncurryName undoes it observationally.
SpacePoint curryName(const SpacePoint& f);
SpacePoint uncurryName(const SpacePoint& g);

// The machine behind curryName: maps an X-name to the pstream-encoded name of
// the partial application.
MonotoneMachine curryMachine(const MonotoneMachine& inner);

// --- fixture validity and equality ------------------------------------------

// Semantic validity on fixture (eventually periodic) names; opaque names and
// structurally unbounded tags are checked to the stated depth and documented
// as such. Returns false for names that visibly violate the representation.
bool validFixtureName(const SpaceDescriptor& space, const SequenceOracle& name,
                      std::size_t depth = 32);

// Equality of denoted points. Exact for eventually periodic fixtures of the
// first-order tags; depth-bounded observational comparison elsewhere.
bool equalityOracle(const SpaceDescriptor& space, const SequenceOracle& a,
                    const SequenceOracle& b, std::size_t depth = 32);

// --- exact analysis of eventually periodic fixtures --------------------------

bool exactSequenceEqual(const kernel::EventuallyPeriodic& a,
                        const kernel::EventuallyPeriodic& b);
bool exactHasNonzero(const kernel::EventuallyPeriodic& p);
std::optional<std::size_t> exactFirstNonzero(const kernel::EventuallyPeriodic& p);
// Tails agree from some index on (the E0 relation), decided exactly.
bool exactTailsAgree(const kernel::EventuallyPeriodic& a,
                     const kernel::EventuallyPeriodic& b);

// Subsequence t |-> ep.at(start + stride * t), again eventually periodic.
kernel::EventuallyPeriodic epSubsequence(const kernel::EventuallyPeriodic& ep,
                                         std::size_t start, std::size_t stride);
// Row n of a pairing-indexed grid fixture: t |-> ep.at(pair(n, t)). The
// diagonal structure of the pairing keeps this eventually periodic.
kernel::EventuallyPeriodic epGridRow(const kernel::EventuallyPeriodic& ep, std::size_t n);
// The stable value of an eventually constant fixture row, if it is one.
std::optional<Nat> epEventualConstant(const kernel::EventuallyPeriodic& row);

}  // namespace repspace::spaces

#endif

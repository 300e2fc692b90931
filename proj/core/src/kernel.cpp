#include "repspace/kernel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace repspace::kernel {

IndexPair unpairIndex(Nat code) {
  // Invert (n+i)(n+i+1)/2 + i: recover the diagonal t = n+i first.
  Nat t = static_cast<Nat>((std::sqrt(8.0 * static_cast<double>(code) + 1.0) - 1.0) / 2.0);
  while (t * (t + 1) / 2 > code) --t;
  while ((t + 1) * (t + 2) / 2 <= code) ++t;
  Nat i = code - t * (t + 1) / 2;
  return {t - i, i};
}

bool isPrefixOf(PrefixView shorter, PrefixView longer) {
  if (shorter.size() > longer.size()) return false;
  return std::equal(shorter.begin(), shorter.end(), longer.begin());
}

// --- SequenceOracle --------------------------------------------------------

struct SequenceOracle::Impl {
  Fn fn;
  std::optional<EventuallyPeriodic> fixture;
  // Memo state; only used when memoize is set. Logically const.
  bool memoize = false;
  mutable std::mutex mu;
  mutable std::vector<std::optional<Nat>> cache;

  Nat at(std::size_t i) const {
    if (fixture) return fixture->at(i);
    if (!memoize) return fn(i);
    {
      std::lock_guard<std::mutex> lock(mu);
      if (i < cache.size() && cache[i]) return *cache[i];
    }
    Nat v = fn(i);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() <= i) cache.resize(i + 1);
    cache[i] = v;
    return v;
  }
};

SequenceOracle::SequenceOracle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

SequenceOracle::SequenceOracle() {
  auto impl = std::make_shared<Impl>();
  impl->fixture = EventuallyPeriodic{{}, {0}};
  impl_ = impl;
}

SequenceOracle SequenceOracle::fromFunction(Fn f) {
  auto impl = std::make_shared<Impl>();
  impl->fn = std::move(f);
  return SequenceOracle(impl);
}

SequenceOracle SequenceOracle::memoized(Fn f) {
  auto impl = std::make_shared<Impl>();
  impl->fn = std::move(f);
  impl->memoize = true;
  return SequenceOracle(impl);
}

SequenceOracle SequenceOracle::eventuallyPeriodic(Prefix preperiod, Prefix period) {
  if (period.empty()) throw PreconditionError("eventually periodic fixture needs a non-empty period");
  auto impl = std::make_shared<Impl>();
  impl->fixture = EventuallyPeriodic{std::move(preperiod), std::move(period)};
  return SequenceOracle(impl);
}

SequenceOracle SequenceOracle::constant(Nat value) {
  return eventuallyPeriodic({}, {value});
}

SequenceOracle SequenceOracle::fromPrefix(Prefix items) {
  return eventuallyPeriodic(std::move(items), {0});
}

Nat SequenceOracle::at(std::size_t i) const { return impl_->at(i); }

Prefix SequenceOracle::prefix(std::size_t length) const {
  Prefix out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(at(i));
  return out;
}

const EventuallyPeriodic* SequenceOracle::fixture() const {
  return impl_->fixture ? &*impl_->fixture : nullptr;
}

SequenceOracle interleaveNames(SequenceOracle p, SequenceOracle q) {
  return SequenceOracle::fromFunction(
      [p, q](std::size_t i) { return i % 2 == 0 ? p.at(i / 2) : q.at(i / 2); });
}

SequenceOracle splitName(SequenceOracle pq, int component) {
  if (component != 0 && component != 1) throw PreconditionError("split component must be 0 or 1");
  return SequenceOracle::fromFunction(
      [pq, component](std::size_t i) { return pq.at(2 * i + static_cast<std::size_t>(component)); });
}

SequenceOracle tupleRows(std::vector<SequenceOracle> rows) {
  return SequenceOracle::fromFunction([rows = std::move(rows)](std::size_t i) -> Nat {
    auto [j, m] = unpairIndex(i);
    if (j >= rows.size()) return 0;
    return rows[j].at(m);
  });
}

SequenceOracle tupleRows(std::function<SequenceOracle(std::size_t)> rows) {
  // Row oracles are fetched on demand and cached so repeated queries hit the
  // same underlying oracle objects.
  auto cache = std::make_shared<std::pair<std::mutex, std::unordered_map<std::size_t, SequenceOracle>>>();
  return SequenceOracle::fromFunction([rows = std::move(rows), cache](std::size_t i) -> Nat {
    auto [j, m] = unpairIndex(i);
    SequenceOracle row;
    {
      std::lock_guard<std::mutex> lock(cache->first);
      auto it = cache->second.find(j);
      if (it == cache->second.end()) it = cache->second.emplace(j, rows(j)).first;
      row = it->second;
    }
    return row.at(m);
  });
}

SequenceOracle rowOf(SequenceOracle tupled, std::size_t j) {
  return SequenceOracle::fromFunction(
      [tupled, j](std::size_t m) { return tupled.at(pairIndex(j, m)); });
}

SequenceOracle consName(Nat head, SequenceOracle tail) {
  return SequenceOracle::fromFunction(
      [head, tail](std::size_t i) { return i == 0 ? head : tail.at(i - 1); });
}

SequenceOracle tailName(SequenceOracle p) {
  return SequenceOracle::fromFunction([p](std::size_t i) { return p.at(i + 1); });
}

// --- MonotoneMachine --------------------------------------------------------

struct MonotoneMachine::Impl {
  std::string descriptor;
  StepFn stepFn;
  NeedFn needFn;
};

MonotoneMachine::MonotoneMachine() { *this = identityMachine(); }

MonotoneMachine MonotoneMachine::make(std::string descriptor, StepFn step, NeedFn inputNeeded) {
  MonotoneMachine m;
  auto impl = std::make_shared<Impl>();
  impl->descriptor = std::move(descriptor);
  impl->stepFn = std::move(step);
  impl->needFn = std::move(inputNeeded);
  m.impl_ = impl;
  return m;
}

Prefix MonotoneMachine::step(PrefixView input, std::size_t fuel) const {
  // Structural read bound: implementations only ever see u[0..min(|u|,fuel)).
  PrefixView readable = input.first(std::min(input.size(), fuel));
  Prefix out = impl_->stepFn(readable, fuel);
  if (out.size() > fuel) out.resize(fuel);  // structural fuel cap
  return out;
}

std::size_t MonotoneMachine::inputNeeded(std::size_t outLen) const {
  if (!impl_->needFn) return static_cast<std::size_t>(-1);
  return impl_->needFn(outLen);
}

const std::string& MonotoneMachine::descriptor() const { return impl_->descriptor; }

bool MonotoneMachine::inDsl() const {
  return impl_->descriptor.find("<host") == std::string::npos;
}

MonotoneMachine identityMachine() {
  return MonotoneMachine::make(
      "id",
      [](PrefixView u, std::size_t) { return Prefix(u.begin(), u.end()); },
      [](std::size_t outLen) { return outLen; });
}

MonotoneMachine constantMachine(Prefix values) {
  std::ostringstream d;
  d << "const(";
  for (std::size_t i = 0; i < values.size(); ++i) d << (i ? "," : "") << values[i];
  d << ")";
  return MonotoneMachine::make(
      d.str(),
      [values](PrefixView, std::size_t fuel) {
        Prefix out;
        out.reserve(fuel);
        for (std::size_t i = 0; i < fuel; ++i) out.push_back(i < values.size() ? values[i] : 0);
        return out;
      },
      [](std::size_t) -> std::size_t { return 0; });
}

MonotoneMachine composeMachines(MonotoneMachine f, MonotoneMachine g) {
  std::string d = "compose(" + f.descriptor() + "," + g.descriptor() + ")";
  return MonotoneMachine::make(d, [f, g](PrefixView u, std::size_t fuel) {
    Prefix mid = f.step(u, fuel);
    return g.step(mid, fuel);
  });
}

MonotoneMachine diagonalMachine() {
  return MonotoneMachine::make(
      "interleave",
      [](PrefixView u, std::size_t fuel) {
        Prefix out;
        for (std::size_t i = 0; i < u.size() && out.size() + 2 <= fuel; ++i) {
          out.push_back(u[i]);
          out.push_back(u[i]);
        }
        return out;
      },
      [](std::size_t outLen) { return (outLen + 1) / 2; });
}

MonotoneMachine splitMachine(int component) {
  if (component != 0 && component != 1) throw PreconditionError("split component must be 0 or 1");
  auto c = static_cast<std::size_t>(component);
  return MonotoneMachine::make(
      "split(" + std::to_string(component) + ")",
      [c](PrefixView u, std::size_t) {
        Prefix out;
        for (std::size_t i = 0; 2 * i + c < u.size(); ++i) out.push_back(u[2 * i + c]);
        return out;
      },
      [c](std::size_t outLen) { return outLen == 0 ? 0 : 2 * (outLen - 1) + c + 1; });
}

MonotoneMachine delayMachine(std::size_t gate, MonotoneMachine inner) {
  std::string d = "delay(" + std::to_string(gate) + "," + inner.descriptor() + ")";
  return MonotoneMachine::make(d, [gate, inner](PrefixView u, std::size_t fuel) -> Prefix {
    if (u.size() < gate || fuel < gate) return {};
    return inner.step(u, fuel - gate);
  });
}

MonotoneMachine indexPermutationMachine(std::string descriptor,
                                        std::function<std::size_t(std::size_t)> perm) {
  return MonotoneMachine::make(std::move(descriptor),
                               [perm](PrefixView u, std::size_t fuel) {
                                 Prefix out;
                                 while (out.size() < fuel) {
                                   std::size_t src = perm(out.size());
                                   if (src >= u.size()) break;
                                   out.push_back(u[src]);
                                 }
                                 return out;
                               });
}

MonotoneMachine partialApplyMachine(MonotoneMachine inner, SequenceOracle captured) {
  std::string d;
  if (const EventuallyPeriodic* fx = captured.fixture()) {
    std::ostringstream os;
    os << "papply(" << inner.descriptor() << ",ep [";
    for (std::size_t i = 0; i < fx->preperiod.size(); ++i) os << (i ? "," : "") << fx->preperiod[i];
    os << ";";
    for (std::size_t i = 0; i < fx->period.size(); ++i) os << (i ? "," : "") << fx->period[i];
    os << "])";
    d = os.str();
  } else {
    d = "<host:papply(" + inner.descriptor() + ")>";
  }
  return MonotoneMachine::make(d, [inner, captured](PrefixView u, std::size_t fuel) {
    // Captured oracle is total, so the merged prefix is limited by the live
    // input and the fuel only.
    std::size_t half = std::min(u.size(), fuel);
    Prefix merged;
    merged.reserve(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
      merged.push_back(captured.at(i));
      merged.push_back(u[i]);
    }
    return inner.step(merged, fuel);
  });
}

std::optional<Nat> runOnOracle(const MonotoneMachine& M, const SequenceOracle& p,
                               std::size_t outIndex, std::size_t fuel) {
  Prefix out = M.step(p.prefix(fuel), fuel);
  if (outIndex < out.size()) return out[outIndex];
  return std::nullopt;
}

namespace {
constexpr std::size_t kOutputFuelCap = std::size_t{1} << 26;
}

SequenceOracle outputOracle(MonotoneMachine M, SequenceOracle input) {
  struct State {
    std::mutex mu;
    Prefix materializedInput;
    Prefix output;
  };
  auto st = std::make_shared<State>();
  return SequenceOracle::fromFunction([M, input, st](std::size_t k) -> Nat {
    std::lock_guard<std::mutex> lock(st->mu);
    if (k < st->output.size()) return st->output[k];
    std::size_t fuel = 16;
    while (fuel <= k) fuel *= 2;
    for (; fuel <= kOutputFuelCap; fuel *= 2) {
      while (st->materializedInput.size() < fuel)
        st->materializedInput.push_back(input.at(st->materializedInput.size()));
      Prefix out = M.step(st->materializedInput, fuel);
      if (out.size() > st->output.size()) st->output = std::move(out);
      if (k < st->output.size()) return st->output[k];
    }
    throw PreconditionError("machine output position " + std::to_string(k) +
                            " never materialized (machine " + M.descriptor() + ")");
  });
}

}  // namespace repspace::kernel

#include "picheck/environment.hpp"

namespace picheck {

void Context::tickStep() {
  if (stepLimit && stepsUsed_ >= *stepLimit) {
    fail(ErrorClass::StepLimit,
         {std::string("Step budget exhausted after " +
                      std::to_string(stepsUsed_) + " reductions")});
  }
  ++stepsUsed_;
}

const SigEntry* Context::findSig(const Name& x) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (const auto* s = std::get_if<SigEntry>(&*it))
      if (s->name == x) return s;
  return nullptr;
}

const SigEntry& Context::lookupTy(const Name& x) const {
  if (const SigEntry* s = findSig(x)) return *s;
  fail(ErrorClass::NotInScope,
       {std::string("The variable " + x.hint + " was not found in scope")});
}

std::optional<TermPtr> Context::lookupDef(const Name& x) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (const auto* d = std::get_if<DefEntry>(&*it))
      if (d->name == x) return d->term;
  return std::nullopt;
}

const DataEntry* Context::findData(std::string_view tycon) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (const auto* d = std::get_if<DataEntry>(&*it))
      if (d->tycon == tycon) return d;
  return nullptr;
}

const DataEntry& Context::lookupData(std::string_view tycon) const {
  if (const DataEntry* d = findData(tycon)) return *d;
  fail(ErrorClass::NotInScope,
       {std::string("The type constructor " + std::string(tycon) +
                    " was not found in scope")});
}

std::vector<Context::CtorHit> Context::findCtor(std::string_view name) const {
  std::vector<CtorHit> hits;
  for (const auto& e : entries_) {
    if (const auto* d = std::get_if<DataEntry>(&e)) {
      for (const auto& c : d->ctors)
        if (c.name == name) hits.push_back(CtorHit{d, &c});
    }
  }
  return hits;
}

std::optional<Context::CtorHit> Context::findCtorIn(
    std::string_view tycon, std::string_view name) const {
  const DataEntry* d = findData(tycon);
  if (!d) return std::nullopt;
  for (const auto& c : d->ctors)
    if (c.name == name) return CtorHit{d, &c};
  return std::nullopt;
}

Context::Scope Context::extend(Entry e) {
  std::size_t saved = entries_.size();
  entries_.push_back(std::move(e));
  return Scope(*this, saved);
}

Context::Scope Context::extendMany(std::vector<Entry> es) {
  std::size_t saved = entries_.size();
  for (auto& e : es) entries_.push_back(std::move(e));
  return Scope(*this, saved);
}

Context::ResurrectGuard::ResurrectGuard(Context& ctx) : ctx_(&ctx) {
  for (std::size_t i = 0; i < ctx.entries_.size(); ++i) {
    if (auto* s = std::get_if<SigEntry>(&ctx.entries_[i])) {
      if (s->eps == Epsilon::Irr) {
        s->eps = Epsilon::Rel;
        flipped_.push_back(i);
      }
    }
  }
}

Context::ResurrectGuard::~ResurrectGuard() {
  if (!ctx_) return;
  for (std::size_t i : flipped_) {
    // Entries popped before the guard unwinds are gone; skip them.
    if (i < ctx_->entries_.size()) {
      if (auto* s = std::get_if<SigEntry>(&ctx_->entries_[i]))
        s->eps = Epsilon::Irr;
    }
  }
}

Context::PosScope Context::atPos(const SourcePos& p) {
  if (!p.known()) return PosScope(*this, false);
  posStack_.push_back(p);
  return PosScope(*this, true);
}

SourcePos Context::where() const {
  return posStack_.empty() ? SourcePos{} : posStack_.back();
}

void Context::fail(ErrorClass cls, std::vector<Fragment> frags) const {
  throw CheckError(where(), cls, std::move(frags));
}

void Context::warn(std::string message) {
  warnings_.push_back(where().str() + ": warning: " + std::move(message));
}

}  // namespace picheck

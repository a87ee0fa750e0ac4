#pragma once

// The checking context: an ordered list of signatures, definitions and
// datatype declarations, a source-position stack for diagnostics, warnings,
// and the session's reduction budget.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "picheck/error.hpp"
#include "picheck/syntax.hpp"

namespace picheck {

class Context {
 public:
  Context() = default;
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  // --- session configuration ---
  std::optional<std::uint64_t> stepLimit;
  bool unfoldDefinitions = true;  // test hook; the CLI never clears it
  bool regularityChecks = false;

  std::uint64_t stepsUsed() const { return stepsUsed_; }
  void resetSteps() { stepsUsed_ = 0; }
  // Counts one reduction step; throws StepLimit when the budget runs out.
  void tickStep();

  // --- lookups (innermost entry wins) ---
  const SigEntry* findSig(const Name& x) const;
  const SigEntry& lookupTy(const Name& x) const;  // throws NotInScope
  std::optional<TermPtr> lookupDef(const Name& x) const;
  const DataEntry* findData(std::string_view tycon) const;
  const DataEntry& lookupData(std::string_view tycon) const;

  struct CtorHit {
    const DataEntry* data;
    const ConstructorDef* ctor;
  };
  // Every datatype in scope declaring a constructor with this name.
  std::vector<CtorHit> findCtor(std::string_view name) const;
  std::optional<CtorHit> findCtorIn(std::string_view tycon,
                                    std::string_view name) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  // --- scoped extension ---
  class Scope {
   public:
    Scope(Context& ctx, std::size_t saved) : ctx_(&ctx), saved_(saved) {}
    Scope(Scope&& o) noexcept : ctx_(o.ctx_), saved_(o.saved_) {
      o.ctx_ = nullptr;
    }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
    Scope& operator=(Scope&&) = delete;
    ~Scope() {
      if (ctx_) ctx_->entries_.resize(saved_);
    }

   private:
    Context* ctx_;
    std::size_t saved_;
  };
  [[nodiscard]] Scope extend(Entry e);
  [[nodiscard]] Scope extendMany(std::vector<Entry> es);

  // Permanent extension, for checked module declarations.
  void install(Entry e) { entries_.push_back(std::move(e)); }

  // --- resurrection ---
  // Rewrites every irrelevant signature tag to relevant for the guard's
  // lifetime, restoring the original tags afterwards.
  class ResurrectGuard {
   public:
    explicit ResurrectGuard(Context& ctx);
    ResurrectGuard(ResurrectGuard&& o) noexcept
        : ctx_(o.ctx_), flipped_(std::move(o.flipped_)) {
      o.ctx_ = nullptr;
    }
    ResurrectGuard(const ResurrectGuard&) = delete;
    ResurrectGuard& operator=(const ResurrectGuard&) = delete;
    ResurrectGuard& operator=(ResurrectGuard&&) = delete;
    ~ResurrectGuard();

   private:
    Context* ctx_;
    std::vector<std::size_t> flipped_;
  };
  [[nodiscard]] ResurrectGuard resurrect() { return ResurrectGuard(*this); }

  // --- source positions ---
  class PosScope {
   public:
    PosScope(Context& ctx, bool pushed) : ctx_(&ctx), pushed_(pushed) {}
    PosScope(PosScope&& o) noexcept : ctx_(o.ctx_), pushed_(o.pushed_) {
      o.ctx_ = nullptr;
    }
    PosScope(const PosScope&) = delete;
    PosScope& operator=(const PosScope&) = delete;
    PosScope& operator=(PosScope&&) = delete;
    ~PosScope() {
      if (ctx_ && pushed_) ctx_->posStack_.pop_back();
    }

   private:
    Context* ctx_;
    bool pushed_;
  };
  [[nodiscard]] PosScope atPos(const SourcePos& p);
  SourcePos where() const;

  // --- diagnostics ---
  [[noreturn]] void fail(ErrorClass cls, std::vector<Fragment> frags) const;
  void warn(std::string message);
  const std::vector<std::string>& warnings() const { return warnings_; }
  void clearWarnings() { warnings_.clear(); }

 private:
  std::vector<Entry> entries_;
  std::vector<SourcePos> posStack_;
  std::vector<std::string> warnings_;
  std::uint64_t stepsUsed_ = 0;
};

// Entry construction for an irrelevant binder (the "demoted" form used when
// an irrelevant lambda introduces its variable).
inline Entry demoted(Name x, TermPtr type) {
  return SigEntry{std::move(x), Epsilon::Irr, std::move(type)};
}

}  // namespace picheck

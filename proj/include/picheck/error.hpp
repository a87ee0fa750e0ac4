#pragma once

// Structured, source-positioned diagnostics. A CheckError aborts the current
// check (fail-fast); warnings accumulate on the context.

#include <exception>
#include <string>
#include <variant>
#include <vector>

#include "picheck/syntax.hpp"

namespace picheck {

enum class ErrorClass {
  NotInScope,
  IrrelevantUse,
  TypeMismatch,
  NotAFunction,
  NotATyCon,
  NotEqualityType,
  NoContradiction,
  NonExhaustive,
  BadConstructorArity,
  UnknownConstructor,
  AmbiguousConstructor,
  EscapingVariable,
  UnificationFailure,
  StepLimit,
  ParseError,
};

// Headline text used in the rendered diagnostic.
const char* errorClassText(ErrorClass cls);

// A display item: either literal text or a term rendered by the pretty
// printer at display time.
using Fragment = std::variant<std::string, TermPtr>;

class CheckError : public std::exception {
 public:
  CheckError(SourcePos pos, ErrorClass cls, std::vector<Fragment> fragments)
      : pos_(std::move(pos)), cls_(cls), fragments_(std::move(fragments)) {
    headline_ = pos_.str() + ": " + errorClassText(cls_);
  }

  const SourcePos& pos() const { return pos_; }
  ErrorClass errorClass() const { return cls_; }
  const std::vector<Fragment>& fragments() const { return fragments_; }

  // FILE:LINE:COL: <class text>, then the fragments indented beneath it.
  std::string render() const;

  const char* what() const noexcept override { return headline_.c_str(); }

 private:
  SourcePos pos_;
  ErrorClass cls_;
  std::vector<Fragment> fragments_;
  std::string headline_;
};

}  // namespace picheck

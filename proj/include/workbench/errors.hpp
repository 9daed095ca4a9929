#pragma once

#include <stdexcept>
#include <string>

namespace workbench {

// Bad user input: malformed JSON, ids out of range, options that violate a
// verb's schema. CLI exit code 2.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical invariant the engine relies on failed to hold (non-exact
// division, a rewriting step that would drive a multiplicity negative, a
// uniqueness guarantee violated, a search budget exhausted). CLI exit code 3.
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// A reproduction run diverged from its committed fixture. CLI exit code 4.
struct FixtureMismatch : std::runtime_error {
  explicit FixtureMismatch(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvariantError(what);
}

inline void require_schema(bool cond, const std::string& what) {
  if (!cond) throw SchemaError(what);
}

}  // namespace workbench

#pragma once

#include <optional>

#include "mdlcfg/term.hpp"

namespace mdlcfg {

/// Seniority t1 <= t2 on ground terms:
///   - any symbol or record is junior to nil;
///   - every term is junior to itself;
///   - records: t1 carries at least the labels of t2, fields junior pointwise
///     (the larger record is the subtype);
///   - choices: the labels of t1 are a subset of those of t2, fields junior
///     pointwise (the smaller choice is the subtype).
///
/// The empty choice is junior to every choice but not to nil. Elements whose
/// guard is constant false are ignored on both sides.
bool leq(const Term& junior, const Term& senior);

/// Greatest lower bound under leq; nullopt when no lower bound exists.
std::optional<Term> meet(const Term& t1, const Term& t2);

/// Least upper bound under leq; nullopt when no common senior exists.
std::optional<Term> join(const Term& t1, const Term& t2);

}  // namespace mdlcfg

#ifndef NRC_ERASURE_HPP_
#define NRC_ERASURE_HPP_

#include "nrc/term.hpp"
#include "nrc/typing.hpp"
#include "nrc/types.hpp"

namespace nrc {

/// Forgetful translation into NRC-delta-iota: bag types and bag constructs
/// collapse onto their set counterparts; dedup and promote are kept.
Type erase_type(const Type& t);
Term erase_term(const Term& m);
TypeEnv erase_env(const TypeEnv& g);

}  // namespace nrc

#endif  // NRC_ERASURE_HPP_

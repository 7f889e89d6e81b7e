#pragma once

#include <string>
#include <vector>

#include "pakelab/proto/handshake.hpp"

namespace pakelab::test {

// 256-bit safe prime with generator 2; big enough that degenerate protocol
// values never occur in practice, small enough to keep thousands of
// handshakes fast.
inline GroupParams test_group() {
    static GroupParams g = GroupParams::from_decimal(
        "163340622117269869239967179267525127961063148621329823890030700477035609844467", "2");
    return g;
}

inline std::vector<std::string> password_universe16() {
    return {"123456",   "password", "qwerty",  "letmein",  "dragon",   "111111",
            "iloveyou", "admin",    "welcome", "monkey",   "sunshine", "princess",
            "football", "shadow",   "master",  "hunter2"};
}

inline std::vector<proto::ProtocolId> all_protocols() {
    return {proto::ProtocolId::eke, proto::ProtocolId::srp6a_nocert,
            proto::ProtocolId::srp6a_cert, proto::ProtocolId::opaque_lite};
}

inline std::vector<proto::ProtocolId> unmitigated_protocols() {
    return {proto::ProtocolId::eke, proto::ProtocolId::srp6a_nocert,
            proto::ProtocolId::opaque_lite};
}

}  // namespace pakelab::test

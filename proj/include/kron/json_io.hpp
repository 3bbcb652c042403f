#pragma once

#include <string>

#include "json.hpp"
#include "kron/qeps.hpp"
#include "kron/rep.hpp"

namespace kron {

using Json = nlohmann::json;

// Exact scalar serialization: "a" or "a|b" with each half a rational in
// lowest terms ("3", "-5/2").  Parsing requires q to rebuild the element.
std::string qeps_to_string_exact(const QEps& x);
QEps qeps_from_string_exact(int q, const std::string& s);

// Class schema:
// {"q":2,"preproj":[[k,mult],...],"preinj":[[k,mult],...],
//  "regular":[{"point":"inf"|[c0,c1,...,1],"partition":[m1,m2,...]}]}
// Points serialize as the full coefficient list of the monic minimal
// polynomial, constant term first; partitions weakly decreasing.
Json iso_class_to_json(const IsoClass& c);
IsoClass iso_class_from_json(const Json& j);

Json closed_point_to_json(const ClosedPoint& z);
ClosedPoint closed_point_from_json(int q, const Json& j);

}  // namespace kron

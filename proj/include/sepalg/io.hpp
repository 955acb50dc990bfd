#pragma once

// JSON forms of the pipeline's artifacts. Complex numbers are [re, im].

#include "sepalg/curves.hpp"
#include "sepalg/degrees.hpp"
#include "sepalg/poly.hpp"
#include "sepalg/relation.hpp"

#include <json.hpp>

namespace sepalg {

using Json = nlohmann::ordered_json;

Json to_json(Complex c);
Json to_json(const VectorXc& v);

/// [{exponents: [q, k1, ...], re, im}, ...] sorted by exponents descending.
Json to_json(const MultiPoly& p);
MultiPoly multipoly_from_json(const Json& j, int n);

Json to_json(const DegreeProfile& p);
Json to_json(const RegularityReport& r);
Json to_json(const GeneralPositionReport& r);
Json to_json(const KTrace& t);
Json to_json(const RelationCertificate& c);
Json to_json(const NoRelation& r);

}  // namespace sepalg

#ifndef FFB_JSONIO_HPP
#define FFB_JSONIO_HPP

#include "json.hpp"

#include "ffb/char_sum.hpp"
#include "ffb/cubic_slice.hpp"
#include "ffb/quadratic.hpp"
#include "ffb/rank_search.hpp"

namespace ffb {

/// JSON shapes shared by the CLI and the verification reports.  Keys are
/// emitted in sorted order by the json library, so equal reports have equal
/// bytes.

nlohmann::json sum_report_json(const CharacterSum& cs);  // counts + magnitude + bias block
nlohmann::json bias_triple_json(const BiasTriple& t);    // {"magnitude","btilde","b"}
nlohmann::json profile_report_json(const BiasProfile& profile, const std::string& field_desc);
std::string profile_csv(const BiasProfile& profile);     // columns n, magnitude, btilde, b

nlohmann::json quad_report_json(const QuadraticForm& Q);
nlohmann::json pencil_report_json(const PencilReport& rep);
nlohmann::json case_report_json(const CaseReport& rep);
nlohmann::json dichotomy_report_json(const SliceDichotomy& d);
nlohmann::json rank_report_json(const RankCertificate& cert);
nlohmann::json identity_report_json(const SliceIdentityReport& rep);

nlohmann::json mat_json(const Mat& m);  // row-major array of arrays

}  // namespace ffb

#endif

#include "ffb/jsonio.hpp"

#include <sstream>

namespace ffb {

using nlohmann::json;

namespace {

json counts_json(const std::vector<std::uint64_t>& counts) {
    json arr = json::array();
    for (auto c : counts) arr.push_back(c);
    return arr;
}

json bias_value(const BiasTriple& t) {
    if (t.b_infinite) return "inf";
    return t.b;
}

std::string field_descriptor_of(const CharacterSum& cs) {
    // base_q = p^m; recover m by factoring out p
    std::uint64_t q = cs.base_q;
    std::uint32_t m = 0;
    while (q > 1) {
        q /= cs.p;
        ++m;
    }
    if (m <= 1) return std::to_string(cs.p);
    return std::to_string(cs.p) + "^" + std::to_string(m);
}

}  // namespace

json sum_report_json(const CharacterSum& cs) {
    BiasTriple t = bias(cs);
    json out;
    out["field"] = field_descriptor_of(cs);
    out["n"] = cs.level;
    out["nvars"] = cs.nvars;
    out["dim"] = cs.dim;
    out["counts"] = counts_json(cs.counts);
    out["magnitude"] = t.magnitude;
    out["magnitude_error_bound"] = double(cs.magnitude_error_bound());
    out["btilde"] = t.btilde;
    out["b"] = bias_value(t);
    return out;
}

json bias_triple_json(const BiasTriple& t) {
    json out;
    out["magnitude"] = t.magnitude;
    out["btilde"] = t.btilde;
    out["b"] = bias_value(t);
    return out;
}

json profile_report_json(const BiasProfile& profile, const std::string& field_desc) {
    json out;
    out["field"] = field_desc;
    json entries = json::array();
    for (const auto& e : profile.entries) {
        json row;
        row["n"] = e.level;
        row["counts"] = counts_json(e.sum.counts);
        row["magnitude"] = e.triple.magnitude;
        row["btilde"] = e.triple.btilde;
        row["b"] = bias_value(e.triple);
        entries.push_back(std::move(row));
    }
    out["entries"] = std::move(entries);
    if (profile.min_b_infinite)
        out["min_b"] = "inf";
    else
        out["min_b"] = profile.min_b;
    out["truncated_at"] = profile.truncated_at ? json(*profile.truncated_at) : json(nullptr);
    return out;
}

std::string profile_csv(const BiasProfile& profile) {
    std::ostringstream os;
    os << "n,magnitude,btilde,b\n";
    os.precision(15);
    for (const auto& e : profile.entries) {
        os << e.level << "," << e.triple.magnitude << "," << e.triple.btilde << ",";
        if (e.triple.b_infinite)
            os << "inf";
        else
            os << e.triple.b;
        os << "\n";
    }
    return os.str();
}

json mat_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json quad_report_json(const QuadraticForm& Q) {
    auto canon = canonicalize(Q);
    auto rad = radical(Q);
    json out;
    out["rank"] = rad.rank;
    out["t"] = canon.t;
    out["alpha"] = canon.alpha ? json(*canon.alpha) : json(nullptr);
    out["beta"] = canon.beta ? json(*canon.beta) : json(nullptr);
    out["radical_basis"] = mat_json(rad.basis.transpose());  // rows are basis vectors
    json mag;
    mag["twice"] = int(2 * Q.dim()) - int(rad.rank);
    out["magnitude_exponent"] = std::move(mag);
    out["bias"] = rad.rank;
    out["odd_rank_bias_note"] =
        "literature states b_1 = rank - 1/2 for odd rank; enumeration and the closed form "
        "give b_n = rank, which is what this tool reports";
    return out;
}

json pencil_report_json(const PencilReport& rep) {
    json out;
    json ranks = json::array();
    for (const auto& dr : rep.ranks) {
        json row;
        row["dir"] = dr.dir;
        row["rank"] = dr.rank;
        ranks.push_back(std::move(row));
    }
    out["directions"] = std::move(ranks);
    json sets = json::array();
    for (const auto& ts : rep.thresholds) {
        json s;
        s["theta"] = ts.theta;
        s["members"] = ts.members;
        s["span_dim"] = ts.span_dim;
        sets.push_back(std::move(s));
    }
    out["thresholds"] = std::move(sets);
    return out;
}

json case_report_json(const CaseReport& rep) {
    json out;
    switch (rep.label) {
        case CaseLabel::Case0: out["case"] = "case0"; break;
        case CaseLabel::Case1: out["case"] = "case1"; break;
        case CaseLabel::Case2: out["case"] = "case2"; break;
        case CaseLabel::SpanOnly: out["case"] = "span_only"; break;
    }
    out["theta"] = rep.theta;
    out["span_dim"] = rep.span_dim;
    out["threshold_set"] = rep.threshold_set;
    if (rep.bound_twice_exponent) out["bound_twice_exponent"] = *rep.bound_twice_exponent;
    if (rep.u) out["u"] = *rep.u;
    if (rep.u2) out["u_prime"] = *rep.u2;
    if (rep.label == CaseLabel::Case1 || rep.label == CaseLabel::Case2) {
        out["w_prime_dim"] = rep.w_prime.cols();
        out["w_dprime_dim"] = rep.w_dprime.cols();
        out["reduced_dim"] = rep.reduced_dim;
    }
    if (rep.reduced) out["reduced"] = rep.reduced->format();
    if (rep.restricted) out["restricted"] = rep.restricted->format();
    if (rep.reduced1) out["restricted_reduced"] = rep.reduced1->format();
    if (rep.theta1) {
        out["theta1"] = *rep.theta1;
        out["span1_dim"] = *rep.span1_dim;
    }
    if (rep.a1_difference) {
        out["a1_difference"] = *rep.a1_difference;
        out["a1_reference_scale"] = *rep.a1_reference_scale;
    }
    return out;
}

json dichotomy_report_json(const SliceDichotomy& d) {
    json out;
    switch (d.kind) {
        case DichotomyKind::RankBound: out["kind"] = "rank_bound"; break;
        case DichotomyKind::ZeroSlices: out["kind"] = "zero_slices"; break;
        case DichotomyKind::ThreeVarReduction: out["kind"] = "three_var_reduction"; break;
    }
    out["y_rank"] = d.y_rank;
    if (d.kind != DichotomyKind::ThreeVarReduction) {
        out["bound_twice_exponent"] = d.bound_twice_exponent;
        out["bound_holds"] = d.bound_holds;
        json slices = json::array();
        for (const auto& sv : d.slice_values) {
            json s;
            s["x"] = sv.x;
            s["zero"] = sv.zero;
            if (!sv.zero) s["twice_exponent"] = sv.twice_exponent;
            slices.push_back(std::move(s));
        }
        out["slices"] = std::move(slices);
    } else {
        out["t_forms"] = mat_json(d.t_forms);
        out["qhat"] = d.qhat->format();
    }
    return out;
}

json rank_report_json(const RankCertificate& cert) {
    json out;
    out["r"] = cert.r;
    out["algebraic_rank"] = cert.algebraic_rank;
    out["ext_level"] = cert.ext_level;
    out["field"] = cert.cert_field->descriptor();
    out["subspace"] = mat_json(cert.subspace.transpose());  // rows are basis vectors
    json dec = json::array();
    for (const auto& [l, R] : cert.decomposition) {
        json item;
        item["l"] = l;
        item["R"] = R.format();
        dec.push_back(std::move(item));
    }
    out["decomposition"] = std::move(dec);
    return out;
}

json identity_report_json(const SliceIdentityReport& rep) {
    json out;
    out["identity_exact"] = rep.identity_exact;
    out["per_direction_law"] = rep.per_direction_law;
    json dirs = json::array();
    for (const auto& d : rep.directions) {
        json row;
        row["dir"] = d.dir;
        row["law_exact"] = d.law_exact;
        row["zero"] = d.zero;
        row["pencil_rank"] = d.pencil_rank;
        if (!d.zero) row["twice_exponent"] = d.twice_exponent;
        dirs.push_back(std::move(row));
    }
    out["directions"] = std::move(dirs);
    out["counts"] = sum_report_json(rep.full);
    return out;
}

}  // namespace ffb

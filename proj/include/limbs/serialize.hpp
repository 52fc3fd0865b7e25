#pragma once

#include <json.hpp>

#include "limbs/parameter.hpp"
#include "limbs/theta.hpp"

namespace limbs {

using Json = nlohmann::ordered_json;

inline Json to_json(const Angle& a) { return a.str(); }
inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const Arc& arc) {
    return Json{{"start", arc.start.str()}, {"end", arc.end.str()}, {"wraps", arc.wraps}};
}

inline Json to_json(const OrbitType& ot) {
    return Json{{"preperiod", ot.preperiod}, {"period", ot.period}};
}

inline Json to_json(const LimbCombinatorics& limb) {
    Json j;
    j["schema"] = "limbs/limb/1";
    j["p"] = limb.p;
    j["q"] = limb.q;
    Json alpha = Json::array(), alpha_prime = Json::array();
    for (const Angle& a : limb.alpha_args) alpha.push_back(a.str());
    for (const Angle& a : limb.alpha_prime_args) alpha_prime.push_back(a.str());
    j["alpha_args"] = alpha;
    j["alpha_prime_args"] = alpha_prime;
    j["identified"] = limb.identified.str();
    j["interval"] = to_json(limb.interval);
    j["root_pair"] = Json::array({limb.root_pair.first.str(), limb.root_pair.second.str()});
    Json regions = Json::object();
    for (std::size_t i = 0; i < limb.v_arcs.size(); ++i) {
        Json arcs = Json::array();
        for (const Arc& a : limb.v_arcs[i]) arcs.push_back(to_json(a));
        regions["V" + std::to_string(i)] = arcs;
    }
    for (std::size_t i = 1; i < limb.vtilde_arcs.size(); ++i) {
        Json arcs = Json::array();
        for (const Arc& a : limb.vtilde_arcs[i]) arcs.push_back(to_json(a));
        regions["V~" + std::to_string(i)] = arcs;
    }
    j["region_arcs"] = regions;
    Json branches = Json::array();
    for (const ReturnBranch& b : limb.branches)
        branches.push_back(Json{{"lo", to_string(b.lo)},
                                {"hi", to_string(b.hi)},
                                {"steps", b.steps}});
    j["branches"] = branches;
    return j;
}

inline Json to_json(const RayTrace& ray) {
    Json j;
    j["schema"] = "limbs/ray/1";
    j["target_argument"] = ray.target_argument.str();
    switch (ray.status) {
        case RayTrace::Status::landed: j["status"] = "landed"; break;
        case RayTrace::Status::diverged: j["status"] = "diverged"; break;
        case RayTrace::Status::max_steps: j["status"] = "max_steps"; break;
    }
    j["landing_estimate"] = to_json(ray.landing_estimate);
    Json samples = Json::array();
    for (const auto& s : ray.samples)
        samples.push_back(Json{{"potential", s.potential},
                               {"re", s.point.real()},
                               {"im", s.point.imag()}});
    j["samples"] = samples;
    return j;
}

inline std::string to_csv(const RayTrace& ray) {
    std::string out = "potential,re,im\n";
    char buf[96];
    for (const auto& s : ray.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.potential, s.point.real(),
                      s.point.imag());
        out += buf;
    }
    return out;
}

inline Json to_json(const EscapeResult& esc) {
    return Json{{"escaped", esc.escaped},
                {"iterations", esc.iterations},
                {"potential", esc.potential},
                {"ext_argument", esc.ext_argument}};
}

inline Json to_json(const ComponentRecord& rec) {
    Json j;
    j["schema"] = "limbs/component/1";
    j["space"] = rec.space.name();
    if (rec.space.kind != ParameterSpace::Kind::mandelbrot) j["q"] = rec.space.q;
    j["period"] = rec.period;
    j["center"] = to_json(rec.center);
    j["root"] = to_json(rec.root);
    if (rec.root_angles)
        j["root_angles"] =
            Json::array({rec.root_angles->first.str(), rec.root_angles->second.str()});
    return j;
}

inline Json to_json(const MisiurewiczRecord& rec) {
    Json j;
    j["schema"] = "limbs/misiurewicz/1";
    j["space"] = rec.space.name();
    if (rec.space.kind != ParameterSpace::Kind::mandelbrot) j["q"] = rec.space.q;
    j["preperiod"] = rec.preperiod;
    j["period"] = rec.period;
    j["parameter"] = to_json(rec.parameter);
    Json angles = Json::array();
    for (const Angle& a : rec.angles) angles.push_back(a.str());
    j["angles"] = angles;
    return j;
}

inline Json to_json(const CriticalOrbitClass& cls) {
    Json j;
    switch (cls.kind) {
        case CriticalOrbitClass::Kind::escaping:
            j["kind"] = "escaping";
            j["iterations"] = cls.escape_iterations;
            break;
        case CriticalOrbitClass::Kind::attracted:
            j["kind"] = "attracted";
            j["period"] = cls.period;
            j["multiplier"] = to_json(cls.multiplier);
            break;
        case CriticalOrbitClass::Kind::preperiodic:
            j["kind"] = "preperiodic";
            j["preperiod"] = cls.preperiod;
            j["period"] = cls.period;
            j["multiplier"] = to_json(cls.multiplier);
            break;
        case CriticalOrbitClass::Kind::unresolved: j["kind"] = "unresolved"; break;
    }
    return j;
}

} // namespace limbs

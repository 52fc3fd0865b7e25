// limbs: exact limb combinatorics, surgery maps on external angles, ray
// tracing, parameter solvers, verification suites, and plane rendering.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "limbs/render.hpp"
#include "limbs/serialize.hpp"
#include "limbs/verify.hpp"

namespace {

using namespace limbs;

struct PQ {
    long p = 1, q = 3;
};

PQ parse_pq(const std::string& s) {
    auto slash = s.find('/');
    check(slash != std::string::npos, "BadArgument", "expected p/q, got '" + s + "'");
    PQ out;
    out.p = std::stol(s.substr(0, slash));
    out.q = std::stol(s.substr(slash + 1));
    return out;
}

void emit(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(path);
        check(f.good(), "IoError", "cannot open " + path);
        f << j.dump(2) << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"combinatorial surgery between Mandelbrot limbs and the 0-limbs of "
                 "lambda z (1+z/q)^q"};
    app.require_subcommand(1);

    // --- limb ---------------------------------------------------------
    auto* limb_cmd = app.add_subcommand("limb", "labeled limb combinatorics as JSON");
    std::string limb_pq;
    std::string limb_out;
    limb_cmd->add_option("p/q", limb_pq, "limb, e.g. 1/3")->required();
    limb_cmd->add_option("--out", limb_out, "write JSON here instead of stdout");

    // --- theta --------------------------------------------------------
    auto* theta_cmd = app.add_subcommand("theta", "surgery maps on external angles");
    std::string theta_pq, theta_angle, theta_map, theta_full;
    bool theta_inverse = false, theta_bar_flag = false, theta_symmetry = false;
    theta_cmd->add_option("p/q", theta_pq, "limb, e.g. 1/3")->required();
    theta_cmd->add_option("angle", theta_angle, "exact angle a/b");
    theta_cmd->add_flag("--inverse", theta_inverse, "evaluate Theta^{-1}");
    theta_cmd->add_flag("--bar", theta_bar_flag, "evaluate the involution Theta-bar");
    theta_cmd->add_flag("--symmetry", theta_symmetry, "print the symmetry angle theta^s");
    theta_cmd->add_option("--map", theta_map, "inter-limb map to p'/q");
    theta_cmd->add_option("--full", theta_full, "full-circle extension to p'/q");

    // --- tune ---------------------------------------------------------
    auto* tune_cmd = app.add_subcommand("tune", "angle tuning by a root pair");
    std::string tune_minus, tune_plus, tune_theta;
    tune_cmd->add_option("t-", tune_minus, "root pair lower angle")->required();
    tune_cmd->add_option("t+", tune_plus, "root pair upper angle (1/1 allowed)")->required();
    tune_cmd->add_option("theta", tune_theta, "angle to tune in")->required();

    // --- ray ----------------------------------------------------------
    auto* ray_cmd = app.add_subcommand("ray", "trace an external ray");
    std::string ray_kind, ray_a, ray_b, ray_c, ray_csv, ray_json;
    double ray_gmin = 1e-8, ray_gstart = 26.0;
    int ray_steps = 12;
    ray_cmd->add_option("kind", ray_kind, "M | L | julia")->required();
    ray_cmd->add_option("arg1", ray_a, "M: angle; L: q; julia: re");
    ray_cmd->add_option("arg2", ray_b, "L: relative angle; julia: im");
    ray_cmd->add_option("arg3", ray_c, "julia: angle");
    ray_cmd->add_option("--gmin", ray_gmin, "target potential (default 1e-8)");
    ray_cmd->add_option("--gstart", ray_gstart, "starting potential (default 26)");
    ray_cmd->add_option("--steps", ray_steps, "steps per potential halving (default 12)");
    ray_cmd->add_option("--csv", ray_csv, "also write samples as CSV");
    ray_cmd->add_option("--json", ray_json, "write JSON here instead of stdout");

    // --- solve --------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "Newton solvers for special parameters");
    std::string solve_kind, solve_space = "M", solve_from_ray;
    int solve_q = 3, solve_period = 1, solve_preperiod = 1;
    double seed_re = 0.0, seed_im = 0.0;
    solve_cmd->add_option("kind", solve_kind, "center | root | mis")->required();
    solve_cmd->add_option("--space", solve_space, "M | L | Lm (default M)");
    solve_cmd->add_option("--q", solve_q, "family degree parameter q");
    solve_cmd->add_option("--period", solve_period, "cycle period k")->required();
    solve_cmd->add_option("--preperiod", solve_preperiod, "preperiod l (mis only)");
    solve_cmd->add_option("--seed-re", seed_re, "Newton seed, real part");
    solve_cmd->add_option("--seed-im", seed_im, "Newton seed, imaginary part");
    solve_cmd->add_option("--from-ray", solve_from_ray, "seed from this ray's landing");

    // --- phi ----------------------------------------------------------
    auto* phi_cmd = app.add_subcommand("phi", "transport hyperbolic data to the 0-limb");
    std::string phi_pq, phi_minus, phi_plus;
    double phi_t_re = 0.0, phi_t_im = 0.0;
    phi_cmd->add_option("p/q", phi_pq)->required();
    phi_cmd->add_option("t-", phi_minus, "component root angle")->required();
    phi_cmd->add_option("t+", phi_plus, "component root angle")->required();
    phi_cmd->add_option("--t-re", phi_t_re, "internal argument, real part");
    phi_cmd->add_option("--t-im", phi_t_im, "internal argument, imaginary part");

    // --- involution ----------------------------------------------------
    auto* inv_cmd = app.add_subcommand("involution", "the limb involution on ray data");
    std::string inv_pq, inv_angle;
    inv_cmd->add_option("p/q", inv_pq)->required();
    inv_cmd->add_option("angle", inv_angle, "even-denominator angle in the wake")->required();

    // --- classify ------------------------------------------------------
    auto* cls_cmd = app.add_subcommand("classify", "classify the free critical orbit");
    std::string cls_space = "M";
    int cls_q = 3, cls_max_iter = 4096;
    double cls_re = 0.0, cls_im = 0.0, cls_tol = 1e-9;
    cls_cmd->add_option("--space", cls_space, "M | L | Lm (default M)");
    cls_cmd->add_option("--q", cls_q, "family degree parameter q");
    cls_cmd->add_option("re", cls_re)->required();
    cls_cmd->add_option("im", cls_im)->required();
    cls_cmd->add_option("--max-iter", cls_max_iter);
    cls_cmd->add_option("--tol", cls_tol);

    // --- render --------------------------------------------------------
    auto* render_cmd = app.add_subcommand("render", "escape-time raster as PGM");
    std::string render_target = "M", render_out = "plane.pgm";
    int render_q = 3, render_w = 512, render_h = 512, render_iter = 512;
    double pr_re = 0.0, pr_im = 0.0;
    std::vector<double> render_bounds;
    std::vector<std::string> render_rays;
    render_cmd->add_option("--target", render_target, "M | L | Lm | julia | juliaP");
    render_cmd->add_option("--q", render_q);
    render_cmd->add_option("--param-re", pr_re, "c or lambda, real part");
    render_cmd->add_option("--param-im", pr_im, "c or lambda, imaginary part");
    render_cmd->add_option("--bounds", render_bounds, "re_min re_max im_min im_max")
        ->expected(4);
    render_cmd->add_option("--width", render_w);
    render_cmd->add_option("--height", render_h);
    render_cmd->add_option("--max-iter", render_iter);
    render_cmd->add_option("--ray", render_rays, "overlay ray angle a/b (repeatable)");
    render_cmd->add_option("--out", render_out, "output PGM path");

    // --- verify --------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "theorem-level verification suites");
    std::string verify_suite, verify_out;
    SuiteParams sp;
    verify_cmd
        ->add_option("suite", verify_suite,
                     "conjugacy | involution | theoremC | theoremD | locus_structure | symmetry")
        ->required();
    verify_cmd->add_option("--p", sp.p);
    verify_cmd->add_option("--p2", sp.p2);
    verify_cmd->add_option("--q", sp.q);
    verify_cmd->add_option("--seed", sp.seed);
    verify_cmd->add_option("--samples", sp.sample_count);
    verify_cmd->add_option("--gmin", sp.g_min);
    verify_cmd->add_option("--out", verify_out, "write report JSON here too");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2, help exits 0
    }

    auto space_of = [&](const std::string& name, int q) {
        if (name == "M") return ParameterSpace::mandelbrot();
        if (name == "L") return ParameterSpace::locus(q);
        if (name == "Lm") return ParameterSpace::monic_locus(q);
        fail("BadArgument", "unknown space '" + name + "'");
    };

    if (limb_cmd->parsed()) {
        PQ pq = parse_pq(limb_pq);
        emit(to_json(limb_combinatorics(pq.p, pq.q)), limb_out);
        return 0;
    }

    if (theta_cmd->parsed()) {
        PQ pq = parse_pq(theta_pq);
        LimbCombinatorics limb = limb_combinatorics(pq.p, pq.q);
        if (theta_symmetry) {
            std::cout << symmetry_angle(limb).str() << "\n";
            return 0;
        }
        check(!theta_angle.empty(), "BadArgument", "theta needs an angle argument");
        if (theta_inverse) {
            Angle y = Angle::parse(theta_angle);
            Rational v = theta_angle == "1/1" || theta_angle == "1" ? Rational(1) : y.value();
            std::cout << theta_limb_inv(limb, v).str() << "\n";
        } else if (theta_bar_flag) {
            std::cout << theta_bar(limb, Angle::parse(theta_angle)).str() << "\n";
        } else if (!theta_map.empty()) {
            PQ pq2 = parse_pq(theta_map);
            check(pq2.q == pq.q, "BadArgument", "inter-limb map needs equal q");
            std::cout << theta_interlimb(limb, limb_combinatorics(pq2.p, pq2.q),
                                         Angle::parse(theta_angle))
                             .str()
                      << "\n";
        } else if (!theta_full.empty()) {
            PQ pq2 = parse_pq(theta_full);
            check(pq2.q == pq.q, "BadArgument", "full-circle map needs equal q");
            std::cout << theta_hat_full(limb, limb_combinatorics(pq2.p, pq2.q),
                                        Angle::parse(theta_angle))
                             .str()
                      << "\n";
        } else {
            Rational v = theta_limb(limb, Angle::parse(theta_angle));
            std::cout << to_string(v) << "\n";
        }
        return 0;
    }

    if (tune_cmd->parsed()) {
        auto parse_unit = [](const std::string& s) {
            if (s == "1" || s == "1/1") return Rational(1);
            return Angle::parse(s).value();
        };
        std::cout << tune_angle(parse_unit(tune_minus), parse_unit(tune_plus),
                                Angle::parse(tune_theta))
                         .str()
                  << "\n";
        return 0;
    }

    if (ray_cmd->parsed()) {
        RayTrace ray;
        if (ray_kind == "M") {
            check(!ray_a.empty(), "BadArgument", "ray M <angle>");
            ray = trace_param_ray(ParameterSpace::mandelbrot(), Angle::parse(ray_a), ray_gmin,
                                  ray_gstart, ray_steps);
        } else if (ray_kind == "L") {
            check(!ray_a.empty() && !ray_b.empty(), "BadArgument", "ray L <q> <angle>");
            ray = trace_param_ray(ParameterSpace::locus(std::stoi(ray_a)),
                                  Angle::parse(ray_b), ray_gmin, ray_gstart, ray_steps);
        } else if (ray_kind == "julia") {
            check(!ray_a.empty() && !ray_b.empty() && !ray_c.empty(), "BadArgument",
                  "ray julia <re> <im> <angle>");
            DynamicalSystem sys =
                DynamicalSystem::quadratic({std::stod(ray_a), std::stod(ray_b)});
            ray = trace_dyn_ray(sys, Angle::parse(ray_c), ray_gstart, ray_gmin, ray_steps);
        } else {
            fail("BadArgument", "ray kind must be M, L, or julia");
        }
        if (!ray_csv.empty()) {
            std::ofstream f(ray_csv);
            check(f.good(), "IoError", "cannot open " + ray_csv);
            f << to_csv(ray);
        }
        emit(to_json(ray), ray_json);
        return 0;
    }

    if (solve_cmd->parsed()) {
        ParameterSpace space = space_of(solve_space, solve_q);
        Complex seed{seed_re, seed_im};
        if (!solve_from_ray.empty())
            seed = trace_param_ray(space, Angle::parse(solve_from_ray), 1e-10).landing_estimate;
        Json j;
        j["schema"] = "limbs/solve/1";
        j["space"] = space.name();
        if (solve_kind == "center") {
            Complex par = solve_special(space, SpecialTarget::center(solve_period), seed);
            j["kind"] = "center";
            j["period"] = solve_period;
            j["parameter"] = to_json(par);
        } else if (solve_kind == "root") {
            Complex par = solve_special(space, SpecialTarget::root(solve_period), seed);
            j["kind"] = "root";
            j["period"] = solve_period;
            j["parameter"] = to_json(par);
        } else if (solve_kind == "mis") {
            Complex par = solve_special(
                space, SpecialTarget::misiurewicz(solve_preperiod, solve_period), seed);
            j["kind"] = "misiurewicz";
            j["preperiod"] = solve_preperiod;
            j["period"] = solve_period;
            j["parameter"] = to_json(par);
        } else {
            fail("BadArgument", "solve kind must be center, root, or mis");
        }
        emit(j, "");
        return 0;
    }

    if (phi_cmd->parsed()) {
        PQ pq = parse_pq(phi_pq);
        PhiResult res = phi_numeric(pq.p, pq.q,
                                    {Angle::parse(phi_minus), Angle::parse(phi_plus)},
                                    {phi_t_re, phi_t_im});
        Json j;
        j["schema"] = "limbs/phi/1";
        j["u_minus"] = to_string(res.u_minus);
        j["u_plus"] = to_string(res.u_plus);
        j["locus_period"] = res.locus_period;
        j["locus_root"] = to_json(res.locus_root);
        j["component"] = to_json(res.component);
        j["lambda"] = to_json(res.lambda);
        emit(j, "");
        return 0;
    }

    if (inv_cmd->parsed()) {
        PQ pq = parse_pq(inv_pq);
        LimbCombinatorics limb = limb_combinatorics(pq.p, pq.q);
        MisiurewiczRecord rec = involution_misiurewicz(limb, Angle::parse(inv_angle));
        emit(to_json(rec), "");
        return 0;
    }

    if (cls_cmd->parsed()) {
        ParameterSpace space = space_of(cls_space, cls_q);
        auto cls =
            classify_critical_orbit(space.system_at({cls_re, cls_im}), cls_max_iter, cls_tol);
        emit(to_json(cls), "");
        return 0;
    }

    if (render_cmd->parsed()) {
        PlaneSpec spec;
        if (render_target == "M") {
            spec.target = {PlaneTarget::Kind::mandelbrot, 0, {}};
            spec.re_min = -2.5; spec.re_max = 1.5; spec.im_min = -2.0; spec.im_max = 2.0;
        } else if (render_target == "L") {
            spec.target = {PlaneTarget::Kind::locus, render_q, {}};
            spec.re_min = -3.0; spec.re_max = 13.0; spec.im_min = -4.7; spec.im_max = 4.7;
        } else if (render_target == "Lm") {
            spec.target = {PlaneTarget::Kind::monic, render_q, {}};
            spec.re_min = -2.0; spec.re_max = 3.0; spec.im_min = -2.0; spec.im_max = 2.0;
        } else if (render_target == "julia") {
            spec.target = {PlaneTarget::Kind::julia, 0, {pr_re, pr_im}};
        } else if (render_target == "juliaP") {
            spec.target = {PlaneTarget::Kind::julia_family, render_q, {pr_re, pr_im}};
            spec.re_min = -2.0 * render_q; spec.re_max = 2.0 * render_q;
            spec.im_min = -1.5 * render_q; spec.im_max = 1.5 * render_q;
        } else {
            fail("BadArgument", "render target must be M, L, Lm, julia, or juliaP");
        }
        if (!render_bounds.empty()) {
            spec.re_min = render_bounds[0];
            spec.re_max = render_bounds[1];
            spec.im_min = render_bounds[2];
            spec.im_max = render_bounds[3];
        }
        spec.width = render_w;
        spec.height = render_h;
        spec.max_iter = render_iter;
        for (const auto& s : render_rays) spec.overlays.push_back(Angle::parse(s));
        ImageGrid grid = render_plane(spec);
        write_pgm(grid, spec.max_iter, render_out);
        std::cout << "{\"written\": \"" << render_out << "\", \"width\": " << grid.width
                  << ", \"height\": " << grid.height << "}\n";
        return 0;
    }

    if (verify_cmd->parsed()) {
        VerificationReport rep = run_suite(verify_suite, sp);
        emit(rep.json(), verify_out);
        if (!verify_out.empty()) emit(rep.json(), "");
        return rep.all_passed() ? 0 : 1;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const limbs::Error& e) {
        limbs::Json j;
        j["error"] = limbs::Json{{"code", e.code()}, {"message", e.what()}};
        std::cout << j.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        limbs::Json j;
        j["error"] = limbs::Json{{"code", "Internal"}, {"message", e.what()}};
        std::cout << j.dump() << "\n";
        return 1;
    }
}

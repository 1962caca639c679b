#include "vsp/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace vsp {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    throw ScenarioError(where + ": " + what);
}

Vec parse_vec(const json& j, const std::string& where, int expect_dim = -1) {
    if (!j.is_array() || j.empty()) field_error(where, "expected a nonempty number array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) field_error(where, "expected numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    if (expect_dim >= 0 && v.size() != expect_dim)
        field_error(where, "expected " + std::to_string(expect_dim) + " entries, got " +
                               std::to_string(v.size()));
    return v;
}

Mat parse_mat(const json& j, const std::string& where, int dim) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
        field_error(where, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                               " matrix (array of rows)");
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const Vec row = parse_vec(j[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]", dim);
        m.row(r) = row.transpose();
    }
    return m;
}

Path parse_path(const json& j, const std::string& where, int dim) {
    if (j.is_array()) return Path::constant_path(parse_vec(j, where, dim));  // shorthand
    if (!j.is_object()) field_error(where, "expected a path object or constant array");
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") {
        if (!j.contains("value")) field_error(where, "constant path needs \"value\"");
        return Path::constant_path(parse_vec(j.at("value"), where + ".value", dim));
    }
    if (kind == "linear") {
        const Vec base = j.contains("base") ? parse_vec(j.at("base"), where + ".base", dim)
                                            : Vec(Vec::Zero(dim));
        if (!j.contains("slope")) field_error(where, "linear path needs \"slope\"");
        return Path::linear(base, parse_vec(j.at("slope"), where + ".slope", dim));
    }
    if (kind == "sinusoidal") {
        const Vec base = j.contains("base") ? parse_vec(j.at("base"), where + ".base", dim)
                                            : Vec(Vec::Zero(dim));
        if (!j.contains("amplitude") || !j.contains("omega"))
            field_error(where, "sinusoidal path needs \"amplitude\" and \"omega\"");
        return Path::sinusoidal(base, parse_vec(j.at("amplitude"), where + ".amplitude", dim),
                                j.at("omega").get<double>(), j.value("phase", 0.0));
    }
    field_error(where + ".kind", "unknown path kind '" + kind + "'");
}

ScalarFn parse_scalar_path(const json& j, const std::string& where) {
    if (j.is_number()) {
        const double c = j.get<double>();
        return [c](double) { return c; };
    }
    const Path p = parse_path(j, where, 1);
    return [p](double t) { return p.scalar(t); };
}

MovingSet parse_set(const json& j, const std::string& where, int dim) {
    if (!j.is_object() || !j.contains("kind")) field_error(where, "expected a set object with \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "whole-space") return make_whole_space(dim);
    if (kind == "half-space") {
        if (!j.contains("normal") || !j.contains("offset"))
            field_error(where, "half-space needs \"normal\" and \"offset\"");
        return make_half_space(parse_vec(j.at("normal"), where + ".normal", dim),
                               parse_path(j.at("offset"), where + ".offset", 1));
    }
    if (kind == "box") {
        if (!j.contains("lo") || !j.contains("hi")) field_error(where, "box needs \"lo\" and \"hi\"");
        return make_box(parse_vec(j.at("lo"), where + ".lo", dim),
                        parse_vec(j.at("hi"), where + ".hi", dim));
    }
    if (kind == "ball" || kind == "sphere") {
        if (!j.contains("center") || !j.contains("radius"))
            field_error(where, kind + " needs \"center\" and \"radius\"");
        const Path center = parse_path(j.at("center"), where + ".center", dim);
        const double radius = j.at("radius").get<double>();
        return kind == "ball" ? make_ball(center, radius) : make_sphere(center, radius);
    }
    if (kind == "translated-convex") {
        if (!j.contains("base") || !j.contains("shift"))
            field_error(where, "translated-convex needs \"base\" and \"shift\"");
        return make_translated(parse_set(j.at("base"), where + ".base", dim),
                               parse_path(j.at("shift"), where + ".shift", dim));
    }
    field_error(where + ".kind", "unknown set kind '" + kind + "'");
}

Forcing parse_forcing(const json& j, const std::string& where, int dim) {
    if (!j.is_object()) field_error(where, "expected a forcing object");
    const std::string kind = j.value("kind", "affine");
    Forcing f;
    if (kind == "zero") {
        f = zero_forcing(dim);
    } else if (kind == "affine") {
        const Mat A = j.contains("matrix") ? parse_mat(j.at("matrix"), where + ".matrix", dim)
                                           : Mat(Mat::Zero(dim, dim));
        const Path b = j.contains("offset") ? parse_path(j.at("offset"), where + ".offset", dim)
                                            : Path::zero(dim);
        f = affine_forcing(A, b);
    } else {
        field_error(where + ".kind", "unknown forcing kind '" + kind + "'");
    }
    if (j.contains("beta_override"))
        f.beta = parse_scalar_path(j.at("beta_override"), where + ".beta_override");
    if (j.contains("kappa_override")) {
        const ScalarFn k = parse_scalar_path(j.at("kappa_override"), where + ".kappa_override");
        f.kappa = [k](double, double t) { return k(t); };
    }
    return f;
}

KernelCoef parse_kernel_coef(const json& j, const std::string& where) {
    if (j.is_number()) return KernelCoef::constant(j.get<double>());
    if (!j.is_object()) field_error(where, "expected a coefficient object or number");
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") return KernelCoef::constant(j.value("value", 0.0));
    if (kind == "affine")
        return KernelCoef::affine(j.value("k0", 0.0), j.value("kt", 0.0), j.value("ks", 0.0));
    if (kind == "exp-decay") {
        const double lambda = j.value("lambda", 0.0);
        if (lambda < 0.0) field_error(where + ".lambda", "exp-decay needs lambda >= 0");
        return KernelCoef::exp_decay(j.value("k0", 0.0), lambda);
    }
    field_error(where + ".kind", "unknown kernel coefficient kind '" + kind + "'");
}

VolterraKernel parse_kernel(const json& j, const std::string& where, int dim, double T0) {
    if (!j.is_object()) field_error(where, "expected a kernel object");
    const std::string kind = j.value("kind", "separable");
    VolterraKernel g;
    if (kind == "zero") {
        g = zero_kernel(dim);
    } else if (kind == "separable") {
        const KernelCoef coef = j.contains("coefficient")
                                    ? parse_kernel_coef(j.at("coefficient"), where + ".coefficient")
                                    : KernelCoef::constant(0.0);
        const Mat B = j.contains("matrix") ? parse_mat(j.at("matrix"), where + ".matrix", dim)
                                           : Mat(Mat::Zero(dim, dim));
        const Vec c = j.contains("offset") ? parse_vec(j.at("offset"), where + ".offset", dim)
                                           : Vec(Vec::Zero(dim));
        g = separable_kernel(coef, B, c, T0);
    } else {
        field_error(where + ".kind", "unknown kernel kind '" + kind + "'");
    }
    if (j.contains("sigma_override")) {
        const ScalarFn s = parse_scalar_path(j.at("sigma_override"), where + ".sigma_override");
        g.sigma = [s](double t, double) { return s(t); };
    }
    if (j.contains("mu_override")) {
        const ScalarFn m = parse_scalar_path(j.at("mu_override"), where + ".mu_override");
        g.mu = [m](double, double t) { return m(t); };
    }
    return g;
}

SolverConfig parse_solver(const json& j, const std::string& where) {
    SolverConfig config;
    if (j.is_null()) return config;
    if (!j.is_object()) field_error(where, "expected a solver object");
    const std::string scheme = j.value("scheme", "catching-up");
    if (scheme == "catching-up") config.scheme = Scheme::CatchingUp;
    else if (scheme == "fixed-point") config.scheme = Scheme::FixedPoint;
    else field_error(where + ".scheme", "unknown scheme '" + scheme + "'");
    config.n = j.value("n", 200);
    if (config.n < 2) field_error(where + ".n", "need n >= 2");
    config.tol_fp = j.value("tol_fp", 1e-8);
    if (!(config.tol_fp > 0.0)) field_error(where + ".tol_fp", "need tol_fp > 0");
    config.max_iterations = j.value("max_iterations", 50);
    if (config.max_iterations < 1) field_error(where + ".max_iterations", "need >= 1");
    config.tol_feas = j.value("tol_feas", 1e-9);
    config.reparametrize = j.value("reparametrize", false);
    if (j.contains("grid")) {
        const Vec g = parse_vec(j.at("grid"), where + ".grid");
        config.explicit_grid.assign(g.data(), g.data() + g.size());
    }
    return config;
}

std::string line_anchor(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ScenarioError(file.string() + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(file.string() + ": parse error at " + line_anchor(text, e.byte) + ": " +
                            e.what());
    }

    try {
        Scenario sc;
        sc.name = j.value("name", file.stem().string());
        if (!j.contains("dimension")) field_error("dimension", "missing");
        sc.dimension = j.at("dimension").get<int>();
        if (sc.dimension < 1) field_error("dimension", "must be >= 1");

        if (!j.contains("interval")) field_error("interval", "missing");
        const Vec interval = parse_vec(j.at("interval"), "interval", 2);
        if (!(interval(1) > interval(0))) field_error("interval", "need T0 < T");
        sc.spec.T0 = interval(0);
        sc.spec.T = interval(1);

        if (!j.contains("set")) field_error("set", "missing");
        sc.spec.set = parse_set(j.at("set"), "set", sc.dimension);
        sc.spec.forcing = j.contains("forcing") ? parse_forcing(j.at("forcing"), "forcing", sc.dimension)
                                                : zero_forcing(sc.dimension);
        sc.spec.kernel = j.contains("kernel")
                             ? parse_kernel(j.at("kernel"), "kernel", sc.dimension, sc.spec.T0)
                             : zero_kernel(sc.dimension);

        sc.spec.z = Path::zero(sc.dimension);
        if (j.contains("z")) {
            const json& zj = j.at("z");
            if (!zj.is_object()) field_error("z", "expected an object");
            if (zj.contains("path")) sc.spec.z = parse_path(zj.at("path"), "z.path", sc.dimension);
            if (zj.contains("rate_bound"))
                sc.spec.z_rate = parse_scalar_path(zj.at("rate_bound"), "z.rate_bound");
        }

        if (!j.contains("x0")) field_error("x0", "missing");
        sc.spec.x0 = parse_vec(j.at("x0"), "x0", sc.dimension);

        sc.config = parse_solver(j.contains("solver") ? j.at("solver") : json(), "solver");

        if (j.contains("verify")) {
            const json& vj = j.at("verify");
            if (!vj.is_object()) field_error("verify", "expected an object");
            sc.verify.envelopes = vj.value("envelopes", false);
            sc.verify.slow = vj.value("slow", false);
            sc.verify.gronwall = vj.value("gronwall", false);
            sc.verify.dependence_ref = vj.value("dependence", "");
        }

        // load-time checks: declared moduli by sampling, feasibility of x0
        validate_moduli(sc.spec);
        const Vec gap = sc.spec.x0 - sc.spec.z.value(sc.spec.T0);
        const double dist0 = distance(sc.spec.set, sc.spec.T0, gap);
        if (dist0 > sc.config.tol_feas)
            field_error("x0", "not in C(T0) + z(T0): dist = " + std::to_string(dist0));
        return sc;
    } catch (const json::exception& e) {
        throw ScenarioError(file.string() + ": " + e.what());
    } catch (const ScenarioError& e) {
        throw ScenarioError(file.string() + ": " + e.what());
    } catch (const ModulusViolation& e) {
        throw ScenarioError(file.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(file.string() + ": " + e.what());
    } catch (const InfeasibleSet& e) {
        throw ScenarioError(file.string() + ": " + e.what());
    }
}

namespace {

Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Scenario make_builtin(std::string name, int dim, double T0, double T, MovingSet set, Forcing f,
                      VolterraKernel g, Path z, Vec x0) {
    Scenario sc;
    sc.name = std::move(name);
    sc.dimension = dim;
    sc.spec.T0 = T0;
    sc.spec.T = T;
    sc.spec.set = std::move(set);
    sc.spec.forcing = std::move(f);
    sc.spec.kernel = std::move(g);
    sc.spec.z = std::move(z);
    sc.spec.x0 = std::move(x0);
    sc.config.n = 200;
    sc.verify.envelopes = true;
    return sc;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> all;

    // constraint absorbs constant negative forcing: x stays at 0
    all.push_back(make_builtin(
        "static-rest", 1, 0.0, 1.0, make_half_space(vec1(1.0), Path::zero(1)),
        affine_forcing(Mat::Zero(1, 1), Path::constant_path(vec1(-1.0))), zero_kernel(1),
        Path::zero(1), vec1(0.0)));

    // C(t) = [t, inf): the sweep drags the state, x_k = t_k exactly
    all.push_back(make_builtin(
        "moving-halfline", 1, 0.0, 1.0,
        make_half_space(vec1(1.0), Path::linear(Vec::Zero(1), vec1(1.0))), zero_forcing(1),
        zero_kernel(1), Path::zero(1), vec1(0.0)));

    // unconstrained x' = x, closed form e^t
    all.push_back(make_builtin("linear-ode", 1, 0.0, 1.0, make_whole_space(1),
                               affine_forcing(Mat::Identity(1, 1), Path::zero(1)), zero_kernel(1),
                               Path::zero(1), vec1(1.0)));

    // unconstrained memory ramp: x' = int_0^t 1 = t, closed form t^2/2
    all.push_back(make_builtin(
        "volterra-ramp", 1, 0.0, 1.0, make_whole_space(1), zero_forcing(1),
        separable_kernel(KernelCoef::constant(1.0), Mat::Zero(1, 1), vec1(1.0)), Path::zero(1),
        vec1(0.0)));

    // memory overcomes the constraint at t = 1, then x' = t - 1; x(2) = 1/2
    all.push_back(make_builtin(
        "memory-activation", 1, 0.0, 2.0, make_half_space(vec1(1.0), Path::zero(1)),
        affine_forcing(Mat::Zero(1, 1), Path::constant_path(vec1(-1.0))),
        separable_kernel(KernelCoef::constant(1.0), Mat::Zero(1, 1), vec1(1.0)), Path::zero(1),
        vec1(0.0)));

    // tangential rotation on the unit circle (prox-regular set)
    {
        Mat rot(2, 2);
        rot << 0.0, -1.0, 1.0, 0.0;
        all.push_back(make_builtin("sphere-drift", 2, 0.0, 1.0,
                                   make_sphere(Path::zero(2), 1.0),
                                   affine_forcing(rot, Path::zero(2)), zero_kernel(2),
                                   Path::zero(2), vec2(1.0, 0.0)));
    }

    // moving ball with memory forcing pushing across it
    all.push_back(make_builtin(
        "ball-follow", 2, 0.0, 1.0,
        make_ball(Path::linear(Vec::Zero(2), vec2(0.5, 0.0)), 1.0), zero_forcing(2),
        separable_kernel(KernelCoef::constant(0.3), Mat::Zero(2, 2), vec2(1.0, 0.0)),
        Path::zero(2), vec2(-1.0, 0.0)));

    // slide along the boundary of {x2 >= 0}: x(t) = (t, 0)
    all.push_back(make_builtin(
        "halfplane-slide", 2, 0.0, 1.0, make_half_space(vec2(0.0, 1.0), Path::zero(1)),
        affine_forcing(Mat::Zero(2, 2), Path::constant_path(vec2(1.0, -1.0))), zero_kernel(2),
        Path::zero(2), vec2(0.0, 0.0)));

    // time-ramped drive x' = 2t on the half-line; x = t^2, phi = max(1, 2t)
    all.push_back(make_builtin(
        "ramp-drive", 1, 0.0, 1.0, make_half_space(vec1(1.0), Path::zero(1)),
        affine_forcing(Mat::Zero(1, 1), Path::linear(Vec::Zero(1), vec1(2.0))), zero_kernel(1),
        Path::zero(1), vec1(0.0)));

    // box constraint carried by a drifting z, fading-memory kernel
    all.push_back(make_builtin(
        "drifting-corral", 2, 0.0, 1.0, make_box(Vec::Zero(2), vec2(1.0, 1.0)),
        affine_forcing(Mat::Zero(2, 2), Path::constant_path(vec2(0.4, 0.1))),
        separable_kernel(KernelCoef::exp_decay(0.5, 1.0), Mat::Zero(2, 2), vec2(0.0, 0.2)),
        Path::linear(Vec::Zero(2), vec2(0.2, 0.0)), vec2(0.5, 0.5)));

    // memory forcing sliding a state along a sphere of radius 2
    all.push_back(make_builtin(
        "sphere-memory", 2, 0.0, 1.0, make_sphere(Path::zero(2), 2.0), zero_forcing(2),
        separable_kernel(KernelCoef::constant(0.25), Mat::Zero(2, 2), vec2(0.0, 1.0)),
        Path::zero(2), vec2(2.0, 0.0)));

    // constant diagonal push into the bottom edge of the unit box
    all.push_back(make_builtin(
        "box-corner", 2, 0.0, 1.0, make_box(Vec::Zero(2), vec2(1.0, 1.0)),
        affine_forcing(Mat::Zero(2, 2), Path::constant_path(vec2(1.0, -1.0))), zero_kernel(2),
        Path::zero(2), vec2(0.0, 0.5)));

    // oblique push on a rim point of the unit disk: the state slides along the
    // curved boundary, so the projected-dynamics defect is O(h) at every node
    all.push_back(make_builtin(
        "ball-slide", 2, 0.0, 2.0, make_ball(Path::zero(2), 1.0),
        affine_forcing(Mat::Zero(2, 2), Path::constant_path(vec2(1.0, 0.0))), zero_kernel(2),
        Path::zero(2), vec2(0.6, 0.8)));

    // same sliding geometry driven purely through the memory term
    all.push_back(make_builtin(
        "ball-slide-memory", 2, 0.0, 2.0, make_ball(Path::zero(2), 1.0), zero_forcing(2),
        separable_kernel(KernelCoef::constant(1.0), Mat::Zero(2, 2), vec2(1.0, 0.0)),
        Path::zero(2), vec2(0.6, 0.8)));

    return all;
}

Scenario builtin_scenario(const std::string& name) {
    for (auto& sc : builtin_scenarios())
        if (sc.name == name) return sc;
    throw ScenarioError("unknown built-in scenario '" + name + "'");
}

}  // namespace vsp

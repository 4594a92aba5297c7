#include "latmix/instance.hpp"

#include <nlohmann/json.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latmix/rng.hpp"

namespace latmix {

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::gaussian: return "gaussian";
        case InstanceKind::orthogonal: return "orthogonal";
        case InstanceKind::unit_sphere: return "unit_sphere";
        case InstanceKind::adversarial: return "adversarial";
        case InstanceKind::custom: return "custom";
    }
    return "custom";
}

InstanceKind instance_kind_from_string(const std::string& s) {
    if (s == "gaussian") return InstanceKind::gaussian;
    if (s == "orthogonal") return InstanceKind::orthogonal;
    if (s == "unit_sphere") return InstanceKind::unit_sphere;
    if (s == "adversarial") return InstanceKind::adversarial;
    if (s == "custom") return InstanceKind::custom;
    throw std::invalid_argument("unknown instance kind: " + s);
}

double objective(const ProblemInstance& inst, const SpinState& s) {
    if (s.n != inst.n) throw std::invalid_argument("objective: state dimension mismatch");
    return (inst.y - inst.b * s.to_vector()).squaredNorm();
}

namespace {

void check_gen_args(int n, double snr) {
    if (n < 1) throw std::invalid_argument("instance generator: n must be >= 1");
    if (snr < 0.0) throw std::invalid_argument("instance generator: snr must be >= 0");
}

Eigen::MatrixXd draw_gaussian_matrix(int n, Rng& rng) {
    Eigen::MatrixXd h(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) h(i, j) = rng.normal();
    return h;
}

Eigen::VectorXd draw_gaussian_vector(int n, Rng& rng) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

ProblemInstance finish_generated(int n, double snr, InstanceKind kind, Eigen::MatrixXd b,
                                 Eigen::VectorXd v, std::string label) {
    ProblemInstance inst;
    inst.n = n;
    inst.snr = snr;
    inst.kind = kind;
    inst.b = std::move(b);
    inst.x_true = SpinState::all_minus_one(n);
    inst.v = std::move(v);
    inst.y = inst.b * inst.x_true.to_vector() + inst.v;
    inst.label = std::move(label);
    return inst;
}

}  // namespace

ProblemInstance gen_gaussian_instance(int n, double snr, std::uint64_t seed, bool with_noise) {
    check_gen_args(n, snr);
    Rng rng(seed);
    Eigen::MatrixXd h = draw_gaussian_matrix(n, rng);
    Eigen::VectorXd v = with_noise ? draw_gaussian_vector(n, rng) : Eigen::VectorXd::Zero(n);
    std::ostringstream label;
    label << "gaussian(n=" << n << ",snr=" << snr << ",seed=" << seed
          << ",noise=" << (with_noise ? 1 : 0) << ")";
    return finish_generated(n, snr, InstanceKind::gaussian, std::sqrt(snr / n) * h, std::move(v),
                            label.str());
}

ProblemInstance gen_orthogonal_instance(int n, double snr, std::uint64_t seed, bool with_noise) {
    check_gen_args(n, snr);
    Rng rng(seed);
    Eigen::MatrixXd g = draw_gaussian_matrix(n, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fold R's diagonal signs into Q so Q is Haar-distributed.
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    Eigen::VectorXd v = with_noise ? draw_gaussian_vector(n, rng) : Eigen::VectorXd::Zero(n);
    std::ostringstream label;
    label << "orthogonal(n=" << n << ",snr=" << snr << ",seed=" << seed
          << ",noise=" << (with_noise ? 1 : 0) << ")";
    return finish_generated(n, snr, InstanceKind::orthogonal, std::sqrt(snr / n) * q, std::move(v),
                            label.str());
}

ProblemInstance gen_unit_sphere_instance(int n, std::uint64_t seed) {
    check_gen_args(n, 1.0);
    Rng rng(seed);
    Eigen::MatrixXd b(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd col;
        double norm = 0.0;
        do {
            col = draw_gaussian_vector(n, rng);
            norm = col.norm();
        } while (norm == 0.0);
        b.col(j) = col / norm;
    }
    std::ostringstream label;
    label << "unit_sphere(n=" << n << ",seed=" << seed << ")";
    return finish_generated(n, 1.0, InstanceKind::unit_sphere, std::move(b),
                            Eigen::VectorXd::Zero(n), label.str());
}

ProblemInstance gen_adversarial_instance(int n, double eps) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("gen_adversarial_instance: n must be even and >= 2");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("gen_adversarial_instance: eps must be in (0,1)");
    int half = n / 2;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < half; ++i) {
        b(i, i) = 1.0;
        b.col(i + half) = -(1.0 + eps) * b.col(i);
    }
    std::ostringstream label;
    label << "adversarial(n=" << n << ",eps=" << eps << ")";
    return finish_generated(n, 1.0, InstanceKind::adversarial, std::move(b),
                            Eigen::VectorXd::Zero(n), label.str());
}

ProblemInstance load_custom_instance(const Eigen::MatrixXd& b_matrix, const Eigen::VectorXd& y,
                                     std::optional<SpinState> x_true,
                                     std::optional<Eigen::VectorXd> v) {
    if (b_matrix.rows() != b_matrix.cols())
        throw std::invalid_argument("load_custom_instance: b_matrix must be square");
    int n = static_cast<int>(b_matrix.rows());
    if (n < 1) throw std::invalid_argument("load_custom_instance: empty matrix");
    if (y.size() != n) throw std::invalid_argument("load_custom_instance: y length mismatch");

    ProblemInstance inst;
    inst.n = n;
    inst.b = b_matrix;
    inst.y = y;
    inst.snr = 1.0;
    inst.kind = InstanceKind::custom;
    inst.x_true = x_true.value_or(SpinState::all_minus_one(n));
    if (inst.x_true.n != n) throw std::invalid_argument("load_custom_instance: x_true dimension mismatch");
    if (v) {
        if (v->size() != n) throw std::invalid_argument("load_custom_instance: v length mismatch");
        inst.v = *v;
    } else {
        inst.v = y - b_matrix * inst.x_true.to_vector();
    }
    inst.label = "custom(n=" + std::to_string(n) + ")";
    return inst;
}

std::string instance_to_json(const ProblemInstance& inst) {
    nlohmann::json j;
    j["n"] = inst.n;
    j["snr"] = inst.snr;
    j["kind"] = to_string(inst.kind);
    std::vector<double> bm;
    bm.reserve(static_cast<std::size_t>(inst.n) * inst.n);
    for (int i = 0; i < inst.n; ++i)
        for (int k = 0; k < inst.n; ++k) bm.push_back(inst.b(i, k));
    j["b_matrix"] = bm;
    j["y"] = std::vector<double>(inst.y.data(), inst.y.data() + inst.n);
    j["x_true_code"] = inst.x_true.code;
    j["v"] = std::vector<double>(inst.v.data(), inst.v.data() + inst.n);
    j["label"] = inst.label;
    return j.dump(2);
}

ProblemInstance instance_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    if (n < 1) throw std::invalid_argument("instance_from_json: n must be >= 1");
    auto bm = j.at("b_matrix").get<std::vector<double>>();
    auto yv = j.at("y").get<std::vector<double>>();
    auto vv = j.at("v").get<std::vector<double>>();
    if (bm.size() != static_cast<std::size_t>(n) * n || yv.size() != static_cast<std::size_t>(n) ||
        vv.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("instance_from_json: array lengths inconsistent with n");

    ProblemInstance inst;
    inst.n = n;
    inst.snr = j.at("snr").get<double>();
    inst.kind = instance_kind_from_string(j.at("kind").get<std::string>());
    inst.b.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) inst.b(i, k) = bm[static_cast<std::size_t>(i) * n + k];
    inst.y = Eigen::Map<const Eigen::VectorXd>(yv.data(), n);
    inst.v = Eigen::Map<const Eigen::VectorXd>(vv.data(), n);
    inst.x_true = SpinState(n, j.at("x_true_code").get<std::uint32_t>());
    inst.label = j.value("label", std::string("custom"));
    return inst;
}

}  // namespace latmix

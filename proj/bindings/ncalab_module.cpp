// Python bindings for the NCA laboratory: simulation, objectives, shapes,
// metrics and the experiment harness.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncalab/config.hpp"
#include "ncalab/evolution.hpp"
#include "ncalab/harness.hpp"
#include "ncalab/io.hpp"
#include "ncalab/metrics.hpp"
#include "ncalab/nca.hpp"
#include "ncalab/objectives.hpp"
#include "ncalab/rng.hpp"
#include "ncalab/shapes.hpp"

namespace py = pybind11;
using namespace ncalab;

namespace {

py::array_t<std::uint8_t> grid_channel(const GridState& g, const std::vector<std::uint8_t>& data) {
    return py::array_t<std::uint8_t>({g.size, g.size}, data.data());
}

py::array_t<std::uint8_t> trace_channel(const RolloutTrace& t,
                                        const std::vector<std::uint8_t>& data) {
    return py::array_t<std::uint8_t>({t.steps, t.grid_size, t.grid_size}, data.data());
}

SensorActionPairs pairs_from_array(py::array_t<std::uint8_t> arr, int k) {
    const auto buf = arr.unchecked<2>();
    if (buf.shape(1) != 2) throw std::invalid_argument("pairs array must have shape (n, 2)");
    SensorActionPairs p;
    p.horizon = k;
    p.pairs.reserve(static_cast<std::size_t>(buf.shape(0)));
    for (py::ssize_t i = 0; i < buf.shape(0); ++i) p.pairs.emplace_back(buf(i, 0), buf(i, 1));
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic laboratory for evolving neural cellular automata";
    m.attr("__version__") = "0.1.0";

    py::enum_<DeathRule>(m, "DeathRule")
        .value("LiteralReplicate", DeathRule::LiteralReplicate)
        .value("OverwriteAlways", DeathRule::OverwriteAlways);
    py::enum_<UpdateMode>(m, "UpdateMode")
        .value("InPlaceRaster", UpdateMode::InPlaceRaster)
        .value("DoubleBuffered", UpdateMode::DoubleBuffered);
    py::enum_<Connectivity>(m, "Connectivity")
        .value("Four", Connectivity::Four)
        .value("Eight", Connectivity::Eight);

    py::class_<StepOptions>(m, "StepOptions")
        .def(py::init<>())
        .def(py::init([](DeathRule d, UpdateMode u) { return StepOptions{d, u}; }),
             py::arg("death_rule"), py::arg("update_mode") = UpdateMode::InPlaceRaster)
        .def_readwrite("death_rule", &StepOptions::death_rule)
        .def_readwrite("update_mode", &StepOptions::update_mode);

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("next_double", &Rng::next_double)
        .def("uniform", &Rng::uniform)
        .def("below", &Rng::below)
        .def("gaussian", &Rng::gaussian);

    py::class_<Genome>(m, "Genome")
        .def(py::init<>())
        .def_property(
            "weights",
            [](const Genome& g) {
                py::array_t<double> arr({kNetworkOutputs, kNetworkInputs});
                auto w = arr.mutable_unchecked<2>();
                for (int o = 0; o < kNetworkOutputs; ++o)
                    for (int i = 0; i < kNetworkInputs; ++i) w(o, i) = g.weights[o][i];
                return arr;
            },
            [](Genome& g, py::array_t<double> arr) {
                const auto w = arr.unchecked<2>();
                if (w.shape(0) != kNetworkOutputs || w.shape(1) != kNetworkInputs)
                    throw std::invalid_argument("weights must have shape (5, 10)");
                for (int o = 0; o < kNetworkOutputs; ++o)
                    for (int i = 0; i < kNetworkInputs; ++i) g.weights[o][i] = w(o, i);
            })
        .def_property(
            "bias",
            [](const Genome& g) {
                py::array_t<double> arr(kNetworkOutputs);
                auto b = arr.mutable_unchecked<1>();
                for (int o = 0; o < kNetworkOutputs; ++o) b(o) = g.bias[o];
                return arr;
            },
            [](Genome& g, py::array_t<double> arr) {
                const auto b = arr.unchecked<1>();
                if (b.shape(0) != kNetworkOutputs)
                    throw std::invalid_argument("bias must have shape (5,)");
                for (int o = 0; o < kNetworkOutputs; ++o) g.bias[o] = b(o);
            })
        .def_readwrite("id", &Genome::id)
        .def_readwrite("parent_id", &Genome::parent_id)
        .def("to_json", &genome_to_json)
        .def_static("from_json", &genome_from_json, py::arg("text"))
        .def_static("load", &load_genome, py::arg("path"))
        .def("save", &save_genome, py::arg("path"));

    py::class_<GridState>(m, "GridState")
        .def(py::init<int>(), py::arg("size"))
        .def_readonly("size", &GridState::size)
        .def_property_readonly("alive", [](const GridState& g) { return grid_channel(g, g.alive); })
        .def_property_readonly("signal",
                               [](const GridState& g) { return grid_channel(g, g.signal); })
        .def("alive_count", &GridState::alive_count);

    py::class_<CellStep>(m, "CellStep")
        .def_readonly("row", &CellStep::row)
        .def_readonly("col", &CellStep::col)
        .def_readonly("step", &CellStep::step)
        .def_readonly("action", &CellStep::action)
        .def_readonly("sensor", &CellStep::sensor)
        .def_readonly("executed", &CellStep::executed);

    py::class_<RolloutTrace>(m, "RolloutTrace")
        .def_readonly("grid_size", &RolloutTrace::grid_size)
        .def_readonly("steps", &RolloutTrace::steps)
        .def_property_readonly("actions",
                               [](const RolloutTrace& t) { return trace_channel(t, t.actions); })
        .def_property_readonly("sensors",
                               [](const RolloutTrace& t) { return trace_channel(t, t.sensors); })
        .def_property_readonly("executed",
                               [](const RolloutTrace& t) { return trace_channel(t, t.executed); })
        .def_property_readonly("grids", [](const RolloutTrace& t) { return t.grids; })
        .def("at", &RolloutTrace::at, py::arg("row"), py::arg("col"), py::arg("step"))
        .def("has_grids", &RolloutTrace::has_grids);

    py::class_<TargetShape>(m, "TargetShape")
        .def_readonly("size", &TargetShape::size)
        .def_readonly("name", &TargetShape::name)
        .def_property_readonly("mask",
                               [](const TargetShape& t) {
                                   return py::array_t<std::uint8_t>({t.size, t.size},
                                                                    t.mask.data());
                               })
        .def("cell_count", &TargetShape::cell_count)
        .def("contains_seed", &TargetShape::contains_seed);

    py::class_<SensorActionPairs>(m, "SensorActionPairs")
        .def(py::init([](py::array_t<std::uint8_t> arr, int k) { return pairs_from_array(arr, k); }),
             py::arg("pairs"), py::arg("k") = 1)
        .def_readonly("horizon", &SensorActionPairs::horizon)
        .def("__len__", [](const SensorActionPairs& p) { return p.pairs.size(); })
        .def_property_readonly("pairs", [](const SensorActionPairs& p) {
            py::array_t<std::uint8_t> arr({static_cast<py::ssize_t>(p.pairs.size()),
                                           static_cast<py::ssize_t>(2)});
            auto a = arr.mutable_unchecked<2>();
            for (std::size_t i = 0; i < p.pairs.size(); ++i) {
                a(static_cast<py::ssize_t>(i), 0) = p.pairs[i].first;
                a(static_cast<py::ssize_t>(i), 1) = p.pairs[i].second;
            }
            return arr;
        });

    m.def("new_seed_grid", &new_seed_grid, py::arg("grid_size"));
    m.def(
        "cell_inputs",
        [](const GridState& g, int row, int col) {
            const auto in = cell_inputs(g, row, col);
            return std::vector<double>(in.begin(), in.end());
        },
        py::arg("grid"), py::arg("row"), py::arg("col"));
    m.def(
        "network_forward",
        [](const Genome& genome, const std::vector<double>& inputs) {
            if (inputs.size() != kNetworkInputs)
                throw std::invalid_argument("inputs must have length 10");
            std::array<double, kNetworkInputs> arr;
            std::copy(inputs.begin(), inputs.end(), arr.begin());
            const NetworkOutput out = network_forward(genome, arr);
            return py::make_tuple(out.replicate, out.new_signal);
        },
        py::arg("genome"), py::arg("inputs"));
    m.def(
        "step",
        [](const GridState& g, const Genome& genome, const StepOptions& opts) {
            return step(g, genome, opts);
        },
        py::arg("grid"), py::arg("genome"), py::arg("options") = StepOptions{});
    m.def("rollout", &rollout, py::arg("genome"), py::arg("grid_size"), py::arg("steps"),
          py::arg("record_grids") = true, py::arg("options") = StepOptions{},
          py::call_guard<py::gil_scoped_release>());

    m.def("loss", &loss, py::arg("trace"), py::arg("target"), py::arg("n0"), py::arg("n1"));
    m.def("build_pairs", &build_pairs, py::arg("trace"), py::arg("k"),
          py::arg("crop_last") = std::nullopt);
    m.def("mutual_information", &mutual_information, py::arg("pairs"));
    m.def("empowerment", &empowerment, py::arg("trace"), py::arg("k"),
          py::arg("crop_last") = std::nullopt);
    m.def(
        "local_action_entropy",
        [](const RolloutTrace& t) { return local_action_entropy(t); }, py::arg("trace"));
    m.def(
        "global_action_entropy",
        [](const RolloutTrace& t) { return global_action_entropy(t); }, py::arg("trace"));

    m.def("square_target", &square_target, py::arg("grid_size"), py::arg("side"));
    m.def("triangle_target", &triangle_target, py::arg("grid_size"), py::arg("base"));
    m.def("x_target", &x_target, py::arg("grid_size"), py::arg("arm"));
    m.def("load_target", &load_target, py::arg("path"), py::arg("allow_seed_outside") = false);
    m.def("save_target", &save_target, py::arg("shape"), py::arg("path"));
    m.def("parse_target_spec", &parse_target_spec, py::arg("spec"), py::arg("grid_size"));

    m.def(
        "extended_loss_series",
        [](const Genome& g, int grid_size, int evolved, int extra, const TargetShape& target,
           const StepOptions& opts) {
            const auto series = extended_loss_series(g, grid_size, evolved, extra, target, opts);
            py::array_t<double> arr({static_cast<py::ssize_t>(series.size()),
                                     static_cast<py::ssize_t>(2)});
            auto a = arr.mutable_unchecked<2>();
            for (std::size_t i = 0; i < series.size(); ++i) {
                a(static_cast<py::ssize_t>(i), 0) = series[i].step;
                a(static_cast<py::ssize_t>(i), 1) = series[i].loss;
            }
            return arr;
        },
        py::arg("genome"), py::arg("grid_size"), py::arg("evolved_steps"), py::arg("extra_steps"),
        py::arg("target"), py::arg("options") = StepOptions{});
    m.def(
        "stability_slope",
        [](py::array_t<double> series, int from_step, int to_step) {
            const auto s = series.unchecked<2>();
            std::vector<LossPoint> pts;
            for (py::ssize_t i = 0; i < s.shape(0); ++i)
                pts.push_back({static_cast<int>(s(i, 0)), s(i, 1)});
            return stability_slope(pts, from_step, to_step);
        },
        py::arg("series"), py::arg("from_step"), py::arg("to_step"));
    m.def("instability", &instability, py::arg("genome"), py::arg("grid_size"), py::arg("steps"),
          py::arg("options") = StepOptions{});
    m.def(
        "transiency",
        [](const RolloutTrace& t) {
            const Transiency r = transiency(t);
            return py::make_tuple(r.mean_per_cell, r.total, r.degenerate);
        },
        py::arg("trace"));
    m.def("connected_components", &connected_components, py::arg("grid"),
          py::arg("connectivity") = Connectivity::Four);
    m.def("boundary_proportion", &boundary_proportion, py::arg("grid"));
    m.def(
        "rank_sum_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const RankSumResult r = rank_sum_test(a, b);
            return py::make_tuple(r.u_statistic, r.p_two_sided);
        },
        py::arg("sample_a"), py::arg("sample_b"));

    m.def("random_genome", &random_genome, py::arg("rng"), py::arg("id") = 0);
    m.def("mutate", &mutate, py::arg("parent"), py::arg("rng"), py::arg("child_id") = 0);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_static("from_json", &ExperimentConfig::from_json_string, py::arg("text"))
        .def_static("from_json_file", &ExperimentConfig::from_json_file, py::arg("path"))
        .def_static("desk_preset", &ExperimentConfig::desk_preset)
        .def_static("paper_preset", &ExperimentConfig::paper_preset)
        .def("to_json", &ExperimentConfig::to_json_string)
        .def_readwrite("k", &ExperimentConfig::k)
        .def_readwrite("grid_size", &ExperimentConfig::grid_size)
        .def_readwrite("steps", &ExperimentConfig::steps)
        .def_readwrite("population_size", &ExperimentConfig::population_size)
        .def_readwrite("generations", &ExperimentConfig::generations)
        .def_readwrite("replicates", &ExperimentConfig::replicates)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("target", &ExperimentConfig::target)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readwrite("workers", &ExperimentConfig::workers)
        .def_property(
            "variant",
            [](const ExperimentConfig& c) { return variant_name(c.variant); },
            [](ExperimentConfig& c, const std::string& name) {
                c.variant = variant_from_name(name);
            });

    m.def("cmd_evolve", &cmd_evolve, py::arg("config"), py::arg("quiet") = true,
          py::call_guard<py::gil_scoped_release>());
    m.def("cmd_sweep_k", &cmd_sweep_k, py::arg("config"), py::arg("k_list"),
          py::arg("quiet") = true, py::call_guard<py::gil_scoped_release>());
    m.def("ascii_render", &ascii_render, py::arg("grid"));
}

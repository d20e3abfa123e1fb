#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cid/cli.hpp"
#include "cid/construct.hpp"
#include "cid/dot.hpp"
#include "cid/dsep.hpp"
#include "cid/examples.hpp"
#include "cid/incentives.hpp"
#include "cid/random_gen.hpp"
#include "cid/solver.hpp"
#include "cid/text_format.hpp"

namespace py = pybind11;
using namespace cid;

namespace {

py::dict report_to_dict(const IncentiveReport& report) {
    py::dict nodes;
    for (const auto& [id, cell] : report.nodes) {
        py::dict entry;
        entry["observation"] = observation_status_name(cell.observation);
        entry["requisite"] = observation_status_name(cell.requisite);
        entry["intervention"] = intervention_class_name(cell.intervention);
        nodes[id.c_str()] = entry;
    }
    py::dict out;
    out["graph"] = report.graph_name;
    out["nodes"] = nodes;
    return out;
}

py::dict pair_to_dict(const SupportingPair& pair) {
    auto path_to_dict = [](const UndirectedPath& p) {
        py::list steps;
        for (Step s : p.steps)
            steps.append(s == Step::Forward ? "forward" : "backward");
        py::dict out;
        out["nodes"] = p.nodes;
        out["steps"] = steps;
        return out;
    };
    py::dict out;
    out["frontdoor"] = path_to_dict(pair.frontdoor);
    out["backdoor"] = path_to_dict(pair.backdoor);
    out["merge_node"] = pair.merge_node;
    return out;
}

} // namespace

PYBIND11_MODULE(pycid, m) {
    m.doc() = "incentive analysis for causal influence diagrams";

    py::register_exception<CidError>(m, "CidError");

    py::class_<CidGraph>(m, "CidGraph")
        .def(py::init<std::string>())
        .def_property_readonly("name", &CidGraph::name)
        .def("add_node",
             [](CidGraph& g, const std::string& id, const std::string& kind,
                const std::string& label) { g.add_node(id, node_kind_from_name(kind), label); },
             py::arg("id"), py::arg("kind"), py::arg("label") = "")
        .def("add_edge", &CidGraph::add_edge)
        .def("nodes",
             [](const CidGraph& g) {
                 std::vector<std::string> out;
                 for (const auto& n : g.nodes())
                     out.push_back(n.id);
                 return out;
             })
        .def("edges", &CidGraph::edges)
        .def("kind", [](const CidGraph& g, const std::string& id) {
            return std::string(node_kind_name(g.kind(id)));
        })
        .def("parents", &CidGraph::parents)
        .def("children", &CidGraph::children)
        .def("__repr__", [](const CidGraph& g) {
            std::ostringstream out;
            out << "CidGraph(" << g.name() << ", " << g.node_count() << " nodes, "
                << g.edge_count() << " edges)";
            return out.str();
        });

    py::class_<CidModel>(m, "CidModel")
        .def_property_readonly("graph", [](const CidModel& m_) { return m_.graph; })
        .def("serialize", &serialize_model)
        .def("__repr__", [](const CidModel& m_) {
            return "CidModel(" + (m_.graph.name().empty() ? "g" : m_.graph.name()) + ")";
        });

    m.def("parse_cid", &parse_cid, py::arg("text"));
    m.def("serialize_cid", &serialize_cid, py::arg("graph"));
    m.def("parse_model",
          [](const std::string& text, int max_domain_size) {
              return parse_model(text, ParseOptions{max_domain_size});
          },
          py::arg("text"), py::arg("max_domain_size") = 4);
    m.def("serialize_model", &serialize_model, py::arg("model"));
    m.def("validate",
          [](const CidGraph& g) {
              auto report = validate(g);
              py::dict out;
              out["ok"] = report.ok;
              py::list errors, warnings;
              for (const auto& e : report.errors)
                  errors.append(py::make_tuple(e.code, e.message, e.subject));
              for (const auto& w : report.warnings)
                  warnings.append(py::make_tuple(w.code, w.message, w.subject));
              out["errors"] = errors;
              out["warnings"] = warnings;
              return out;
          },
          py::arg("graph"));
    m.def("relatives",
          [](const CidGraph& g, const std::string& node, const std::string& direction) {
              if (direction != "ancestors" && direction != "descendants")
                  throw CidError(ErrorCode::BadParams,
                                 "direction must be 'ancestors' or 'descendants'");
              return relatives(g, node,
                               direction == "ancestors" ? Direction::Ancestors
                                                        : Direction::Descendants);
          },
          py::arg("graph"), py::arg("node"), py::arg("direction"));
    m.def("serialize_dot",
          [](const CidGraph& g, py::object report_json) {
              if (report_json.is_none())
                  return serialize_dot(g);
              IncentiveReport report = report_from_json(report_json.cast<std::string>());
              return serialize_dot(g, &report);
          },
          py::arg("graph"), py::arg("report_json") = py::none());

    m.def("d_separated",
          [](const CidGraph& g, const std::set<std::string>& X, const std::set<std::string>& Y,
             const std::set<std::string>& Z) { return d_separated(g, X, Y, Z); },
          py::arg("graph"), py::arg("x"), py::arg("y"), py::arg("z"));
    m.def("find_supporting_pair",
          [](const CidGraph& g, const std::string& X) {
              return pair_to_dict(find_supporting_pair(g, X));
          },
          py::arg("graph"), py::arg("node"));

    m.def("observation_incentive", &observation_incentive, py::arg("graph"), py::arg("node"));
    m.def("requisite_observations", &requisite_observations, py::arg("graph"));
    m.def("reduced_graph", &reduced_graph, py::arg("graph"));
    m.def("intervention_incentive",
          [](const CidGraph& g, const std::string& X) {
              return std::string(intervention_class_name(intervention_incentive(g, X)));
          },
          py::arg("graph"), py::arg("node"));
    m.def("analyze", [](const CidGraph& g) { return report_to_dict(analyze(g)); },
          py::arg("graph"));
    m.def("analyze_json", [](const CidGraph& g) { return report_to_json(analyze(g)); },
          py::arg("graph"));

    py::class_<Policy>(m, "Policy")
        .def(py::init([](const std::string& decision, const std::vector<std::string>& context,
                         const std::vector<int>& rule) {
                 return Policy{decision, context, rule};
             }),
             py::arg("decision"), py::arg("context"), py::arg("rule"))
        .def_readonly("decision", &Policy::decision)
        .def_readonly("context", &Policy::context)
        .def_readonly("rule", &Policy::rule);

    py::class_<Intervention>(m, "Intervention")
        .def(py::init([](const std::string& target, const std::vector<int>& rule) {
                 return Intervention{target, rule};
             }),
             py::arg("target"), py::arg("rule"))
        .def_readonly("target", &Intervention::target)
        .def_readonly("rule", &Intervention::rule);

    m.def("joint_query",
          [](const CidModel& model, const Policy& policy,
             const std::map<std::string, std::string>& event,
             std::optional<Intervention> intervention) {
              return joint_query(model, policy, intervention, event);
          },
          py::arg("model"), py::arg("policy"), py::arg("event"),
          py::arg("intervention") = py::none());
    m.def("policy_value",
          [](const CidModel& model, const Policy& policy,
             std::optional<Intervention> intervention) {
              return policy_value(model, policy, intervention);
          },
          py::arg("model"), py::arg("policy"), py::arg("intervention") = py::none());
    m.def("optimal_value",
          [](const CidModel& model) {
              OptimalResult r = optimal_value(model);
              py::dict policy;
              policy["decision"] = r.policy.decision;
              policy["context"] = r.policy.context;
              policy["rule"] = r.policy.rule;
              return py::make_tuple(r.value, policy);
          },
          py::arg("model"));
    m.def("value_of_information", &value_of_information, py::arg("model"), py::arg("node"));
    m.def("value_of_control", &value_of_control, py::arg("model"), py::arg("node"));

    m.def("completeness_construction", &completeness_construction, py::arg("graph"),
          py::arg("node"));
    m.def("control_construction", &control_construction, py::arg("graph"), py::arg("node"));
    m.def("random_graph", &random_graph, py::arg("node_count"), py::arg("edge_probability"),
          py::arg("seed"));
    m.def("random_model", &random_model, py::arg("graph"), py::arg("domain_size"), py::arg("seed"));

    m.def("builtin_example", &builtin_example, py::arg("name"), py::arg("horizon") = 2,
          py::arg("keep_decision") = "");
    m.def("builtin_example_names", [] { return builtin_example_names(); });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}

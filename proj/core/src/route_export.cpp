#include "sva/route_export.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace sva {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string color_for(int uv) { return kPalette[uv % 8]; }

std::string dot_export(const Instance& inst, const Plan& plan) {
  std::ostringstream os;
  os << "digraph routes {\n  rankdir=LR;\n";
  for (int m = 0; m < inst.num_uvs; ++m) {
    os << "  subgraph cluster_uv" << m << " {\n"
       << "    label=\"UV " << m << "\";\n    color=\"" << color_for(m)
       << "\";\n";
    // Nodes are replicated per subgraph so each UV shows its own route.
    auto nid = [m](NodeId v) { return "u" + std::to_string(m) + "_n" + std::to_string(v); };
    std::vector<char> touched(inst.V(), 0);
    touched[0] = 1;  // r0 always shown
    for (NodeId i = 0; i < inst.V(); ++i) {
      for (NodeId j = 0; j < inst.V(); ++j) {
        if (i != j && plan.y(m, i, j)) touched[i] = touched[j] = 1;
      }
    }
    for (NodeId v = 0; v < inst.V(); ++v) {
      if (!touched[v]) continue;
      os << "    " << nid(v) << " [label=\"" << inst.node_names[v];
      if (inst.is_poi(v)) os << "\\ne=" << inst.incentive(m, v);
      os << "\"";
      if (v == 0) {
        os << ", shape=doublecircle, style=filled, fillcolor=gold";
      } else if (inst.is_station(v)) {
        os << ", shape=box, style=filled, fillcolor=lightblue";
      } else {
        os << ", shape=ellipse";
      }
      os << "];\n";
    }
    for (NodeId i = 0; i < inst.V(); ++i) {
      for (NodeId j = 0; j < inst.V(); ++j) {
        if (i == j || !plan.y(m, i, j)) continue;
        os << "    " << nid(i) << " -> " << nid(j) << " [color=\""
           << color_for(m) << "\", label=\"" << plan.x(m, i, j) << "\"];\n";
      }
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string svg_export(const Instance& inst, const Plan& plan) {
  double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
  for (const Point& p : inst.coords) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double margin = 0.08 * std::max(max_x - min_x, max_y - min_y) + 5.0;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
     << min_x - margin << " " << min_y - margin << " "
     << (max_x - min_x) + 2 * margin << " " << (max_y - min_y) + 2 * margin
     << "\">\n";
  for (int m = 0; m < inst.num_uvs; ++m) {
    for (NodeId i = 0; i < inst.V(); ++i) {
      for (NodeId j = 0; j < inst.V(); ++j) {
        if (i == j || !plan.y(m, i, j)) continue;
        os << "  <line x1=\"" << inst.coords[i].x << "\" y1=\""
           << inst.coords[i].y << "\" x2=\"" << inst.coords[j].x << "\" y2=\""
           << inst.coords[j].y << "\" stroke=\"" << color_for(m)
           << "\" stroke-width=\"0.8\"/>\n";
      }
    }
  }
  for (NodeId v = 0; v < inst.V(); ++v) {
    const Point& p = inst.coords[v];
    if (v == 0) {
      os << "  <circle cx=\"" << p.x << "\" cy=\"" << p.y
         << "\" r=\"3\" fill=\"gold\" stroke=\"black\"/>\n";
    } else if (inst.is_station(v)) {
      os << "  <rect x=\"" << p.x - 2 << "\" y=\"" << p.y - 2
         << "\" width=\"4\" height=\"4\" fill=\"lightblue\" stroke=\"black\"/>\n";
    } else {
      os << "  <circle cx=\"" << p.x << "\" cy=\"" << p.y
         << "\" r=\"2\" fill=\"white\" stroke=\"black\"/>\n";
    }
    os << "  <text x=\"" << p.x + 3 << "\" y=\"" << p.y - 2
       << "\" font-size=\"4\">" << inst.node_names[v] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string json_export(const Instance& inst, const Plan& plan) {
  const std::vector<std::vector<NodeId>> orders = plan_visit_orders(inst, plan);
  nlohmann::json routes = nlohmann::json::array();
  for (int m = 0; m < inst.num_uvs; ++m) {
    nlohmann::json seq = nlohmann::json::array();
    double collected = 0.0;
    for (NodeId p : orders[m]) {
      seq.push_back(inst.node_names[p]);
      collected += inst.incentive(m, p);
    }
    routes.push_back(nlohmann::json{{"uv", m},
                                    {"pois_in_order", std::move(seq)},
                                    {"incentive_collected", collected}});
  }
  return nlohmann::json{{"routes", std::move(routes)}}.dump(2) + "\n";
}

}  // namespace

ExportFormat parse_export_format(const std::string& name) {
  if (name == "dot") return ExportFormat::kDot;
  if (name == "svg") return ExportFormat::kSvg;
  if (name == "json") return ExportFormat::kJson;
  throw std::invalid_argument("unknown export format '" + name +
                              "' (expected dot, svg, or json)");
}

std::string export_routes(const Instance& inst, const Plan& plan,
                          ExportFormat format) {
  const std::vector<PlanIssue> issues = check_plan(inst, plan);
  if (!issues.empty()) {
    throw PlanInfeasibleError(issues.front(),
                              "infeasible plan: " + issues.front().message);
  }
  switch (format) {
    case ExportFormat::kDot: return dot_export(inst, plan);
    case ExportFormat::kSvg: return svg_export(inst, plan);
    case ExportFormat::kJson: return json_export(inst, plan);
  }
  throw std::invalid_argument("unknown export format");
}

}  // namespace sva

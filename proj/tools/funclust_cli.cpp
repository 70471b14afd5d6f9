// Command-line front end. Domain errors exit 1 with the error code on stderr;
// usage errors exit 2.

#include "funclust/funclust.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using funclust::format_number;
using nlohmann::json;

struct InputOptions {
    std::string path;
    bool points = false;
    bool pseudo = false;
};

void add_input(CLI::App* cmd, InputOptions& in, const std::string& name = "input") {
    cmd->add_option(name, in.path, "Distance CSV (or point CSV with --points)")->required();
}

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    cmd->add_flag("--points", in.points, "Input is a point cloud; distances are Euclidean");
    cmd->add_flag("--pseudo", in.pseudo, "Allow zero distances between distinct points");
}

funclust::FiniteMetricSpace load(const InputOptions& in) {
    return in.points ? funclust::read_point_space(in.path, in.pseudo) : funclust::read_distance_csv(in.path, in.pseudo);
}

json space_json(const funclust::FiniteMetricSpace& space) {
    json rows = json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < space.size(); ++j) {
            row.push_back(space(i, j));
        }
        rows.push_back(std::move(row));
    }
    return {{"labels", space.labels()}, {"distances", rows}};
}

/// Output sink: stdout, or a file when `path` is set.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw funclust::Error("IoError", "cannot write " + path);
            }
        }
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<std::uint64_t> seeds_from(std::uint64_t first, std::size_t count) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t k = 0; k < count; ++k) {
        seeds.push_back(first + k);
    }
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functorial hierarchical clustering tools"};
    app.require_subcommand(1);

    std::string format = "text";
    std::string out_path;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    // cluster
    InputOptions cluster_in;
    std::string linkage = "single";
    auto* cluster = app.add_subcommand("cluster", "Hierarchical clustering of a metric space");
    add_input(cluster, cluster_in);
    add_input_flags(cluster, cluster_in);
    cluster->add_option("--linkage", linkage, "single, complete or average")
        ->check(CLI::IsMember({"single", "complete", "average"}));
    cluster->add_option("--format", format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));

    // ultrametric
    InputOptions ultra_in;
    auto* ultra = app.add_subcommand("ultrametric", "Minimax-path (single-linkage) ultrametric as distance CSV");
    add_input(ultra, ultra_in);
    add_input_flags(ultra, ultra_in);

    // gh
    InputOptions gh_a;
    InputOptions gh_b;
    bool gh_exact = false;
    bool gh_bound = false;
    bool gh_witness = false;
    std::size_t gh_limit = funclust::kDefaultExhaustiveLimit;
    auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distance, max |d_X - d_Y| over correspondences (no 1/2)");
    add_input(gh, gh_a, "first");
    add_input(gh, gh_b, "second");
    add_input_flags(gh, gh_a);
    auto* exact_flag = gh->add_flag("--exact", gh_exact, "Exact value by branch and bound");
    auto* bound_flag = gh->add_flag("--bound", gh_bound, "Cheap lower bound");
    exact_flag->excludes(bound_flag);
    gh->add_flag("--witness", gh_witness, "Also print an optimal correspondence (with --exact)");
    gh->add_option("--limit", gh_limit, "Largest |X|+|Y| for --exact");

    // stability and converge
    std::string shape;
    std::vector<std::size_t> sizes;
    std::size_t seed_count = 1;
    std::size_t net_size = 0;
    bool iid = false;
    auto* stability = app.add_subcommand("stability", "Resampling stability table of the minimax-path metric");
    auto* converge = app.add_subcommand("converge", "Convergence table to the component metric");
    for (auto* cmd : {stability, converge}) {
        cmd->add_option("--spec", shape, "circle:<r>, disk:<cx>,<cy>,<r>, blobs:<gap> or disks3:<w13>,<w23>,<w12>")
            ->required();
        cmd->add_option("--sizes", sizes, "Sample sizes")->required()->delimiter(',');
        cmd->add_option("--seed", seed, "First seed")->required();
        cmd->add_option("--seeds", seed_count, "Number of consecutive seeds");
        cmd->add_option("--net-size", net_size, "Reference net size (default 50 x largest size)");
        cmd->add_flag("--iid", iid, "Independent uniform samples instead of low-discrepancy ones");
        cmd->add_option("--out", out_path, "Write the CSV table here instead of stdout");
    }

    // zigzag
    InputOptions zz_in;
    std::size_t zz_n = 1;
    std::size_t zz_count = 2;
    double zz_eps = 1.0;
    std::string diagram_path;
    auto* zigzag = app.add_subcommand("zigzag", "Bootstrap zigzag of threshold clusterings and its barcode");
    add_input(zigzag, zz_in);
    add_input_flags(zigzag, zz_in);
    zigzag->add_option("--n", zz_n, "Points drawn per sample, with replacement")->required();
    zigzag->add_option("--N", zz_count, "Number of samples")->required();
    zigzag->add_option("--eps", zz_eps, "Single-linkage threshold")->required();
    zigzag->add_option("--seed", seed, "Random seed")->required();
    zigzag->add_option("--diagram", diagram_path, "Write the diagram as JSON here");
    zigzag->add_option("--format", format, "text (barcode) or json (diagram and barcode)")
        ->check(CLI::IsMember({"text", "json"}));

    // check
    std::string scheme_name;
    bool conditions = false;
    bool search = false;
    bool monic = false;
    bool no_fixtures = false;
    std::size_t trials = 500;
    std::size_t max_n = 8;
    auto* check = app.add_subcommand("check", "Uniqueness conditions and functoriality counterexample search");
    check->add_option("--scheme", scheme_name, "single, complete, average or cardinality:<m>")->required();
    check->add_flag("--conditions", conditions, "Check conditions I, II and III");
    check->add_flag("--search", search, "Search for a map the scheme does not carry to a persistence-preserving map");
    check->add_flag("--monic", monic, "Search injective maps only");
    check->add_flag("--no-fixtures", no_fixtures, "Skip the built-in fixtures before random trials");
    check->add_option("--trials", trials, "Random maps to try");
    check->add_option("--max-n", max_n, "Largest source size");
    check->add_option("--seed", seed, "Random seed")->required();
    check->add_option("--threads", threads, "Worker threads");

    // mapper
    InputOptions mapper_in;
    std::size_t lens_axis = 0;
    std::string lens_base;
    std::size_t intervals = 4;
    double overlap = 0.25;
    double mapper_eps = 1.0;
    auto* mapper = app.add_subcommand("mapper", "Graph of clusters over an interval cover of a lens");
    add_input(mapper, mapper_in);
    add_input_flags(mapper, mapper_in);
    mapper->add_option("--lens-axis", lens_axis, "Coordinate used as lens (point input)");
    mapper->add_option("--lens-base", lens_base, "Lens is the distance to this labelled point");
    mapper->add_option("--intervals", intervals, "Number of cover intervals");
    mapper->add_option("--overlap", overlap, "Overlap fraction of consecutive intervals");
    mapper->add_option("--eps", mapper_eps, "Single-linkage threshold inside cover elements");
    mapper->add_option("--format", format, "json or dot")->check(CLI::IsMember({"text", "json", "dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        auto& out = std::cout;
        if (*cluster) {
            const auto space = load(cluster_in);
            const auto rule = funclust::parse_linkage(linkage);
            const auto result = rule == funclust::LinkageRule::single ? funclust::rgen(space)
                                                                        : funclust::agglomerate(space, rule);
            if (format == "json") {
                out << funclust::dendrogram_json(result).dump(2) << '\n';
            } else if (format == "dot") {
                funclust::write_dendrogram_dot(out, result);
            } else {
                funclust::write_dendrogram_text(out, result);
            }
        } else if (*ultra) {
            funclust::write_distance_csv(out, funclust::epsilon_metric(load(ultra_in)).space());
        } else if (*gh) {
            gh_b.points = gh_a.points;
            gh_b.pseudo = gh_a.pseudo;
            const auto x = load(gh_a);
            const auto y = load(gh_b);
            if (gh_bound) {
                out << format_number(funclust::gh_lower_bound(x, y)) << '\n';
            } else {
                const auto result = funclust::gh_exact(x, y, gh_limit);
                out << format_number(result.value) << '\n';
                if (gh_witness) {
                    funclust::write_correspondence(out, result.witness, x, y);
                }
            }
        } else if (*stability || *converge) {
            const auto spec = funclust::parse_shape(shape);
            const auto seeds = seeds_from(seed, seed_count);
            funclust::ExperimentOptions options;
            options.sampling.net_size = net_size;
            options.sampling.mode = iid ? funclust::SamplingMode::iid : funclust::SamplingMode::quasi;
            Output sink(out_path);
            auto& table = sink.stream();
            if (*stability) {
                table << "n,seed,covering,second_covering,left,bound,exact,pass\n";
                for (const auto& row : funclust::stability_experiment(spec, sizes, seeds, options)) {
                    table << row.n << ',' << row.seed << ',' << format_number(row.covering) << ','
                          << format_number(row.second_covering) << ',' << format_number(row.left) << ','
                          << format_number(row.bound) << ',' << row.exact << ',' << row.pass << '\n';
                }
            } else {
                const auto result = funclust::convergence_experiment(spec, sizes, seeds, options);
                table << "# net_spacing=" << format_number(result.net_spacing) << '\n';
                for (std::size_t a = 0; a < result.components.size(); ++a) {
                    for (std::size_t b = a + 1; b < result.components.size(); ++b) {
                        table << "# d_A(" << result.components.label(a) << ',' << result.components.label(b)
                              << ")=" << format_number(result.components(a, b)) << '\n';
                    }
                }
                table << "n,seed,covering,separation,distortion,bound,sandwich,pass\n";
                for (const auto& row : result.rows) {
                    table << row.n << ',' << row.seed << ',' << format_number(row.covering) << ','
                          << format_number(row.separation) << ',' << format_number(row.distortion) << ','
                          << format_number(row.bound) << ',' << row.sandwich << ',' << row.pass << '\n';
                }
            }
        } else if (*zigzag) {
            const auto space = load(zz_in);
            const auto diagram = funclust::bootstrap_zigzag(space, {zz_n, zz_count, zz_eps, seed});
            const auto linear = funclust::linearize(diagram);
            const auto barcode = funclust::interval_decomposition(linear);
            json vertices = json::array();
            for (std::size_t i = 0; i < diagram.blocks.size(); ++i) {
                json basis = json::array();
                for (const auto& block : diagram.blocks[i]) {
                    std::string name = "{";
                    for (std::size_t k = 0; k < block.size(); ++k) {
                        name += (k ? "," : "") + space.label(block[k]);
                    }
                    basis.push_back(name + "}");
                }
                vertices.push_back(std::move(basis));
            }
            json arrows = json::array();
            for (const auto& arrow : diagram.arrows) {
                arrows.push_back({{"direction", arrow.forward ? "forward" : "backward"}, {"columns", arrow.image}});
            }
            json bars = json::array();
            for (const auto& bar : barcode) {
                bars.push_back({bar.birth, bar.death});
            }
            const json diagram_json = {{"vertices", vertices}, {"arrows", arrows}};
            if (!diagram_path.empty()) {
                Output sink(diagram_path);
                sink.stream() << diagram_json.dump(2) << '\n';
            }
            if (format == "json") {
                out << json{{"diagram", diagram_json}, {"barcode", bars}}.dump(2) << '\n';
            } else {
                for (const auto& bar : barcode) {
                    out << bar.birth << ' ' << bar.death << '\n';
                }
            }
        } else if (*check) {
            const auto scheme = funclust::scheme_by_name(scheme_name);
            if (!conditions && !search) {
                conditions = search = true;
            }
            json report = {{"scheme", scheme.name}};
            if (conditions) {
                funclust::ConditionOptions options;
                options.seed = seed;
                const auto result = funclust::check_conditions(scheme, options);
                json items = json::array();
                for (const auto& c : result.results) {
                    items.push_back({{"condition", c.condition},
                                     {"passed", c.passed},
                                     {"checked", c.checked},
                                     {"witness", c.witness}});
                }
                report["conditions"] = items;
            }
            if (search) {
                funclust::SearchOptions options;
                options.seed = seed;
                options.trials = trials;
                options.max_n = max_n;
                options.injective_only = monic;
                options.include_fixtures = !no_fixtures;
                options.threads = threads;
                const auto found = funclust::counterexample_search(scheme, options);
                if (found) {
                    json image = json::array();
                    for (std::size_t x = 0; x < found->map.image().size(); ++x) {
                        image.push_back({found->source.label(x), found->target.label(found->map.image()[x])});
                    }
                    report["witness"] = {
                        {"origin", found->origin},
                        {"source", space_json(found->source)},
                        {"target", space_json(found->target)},
                        {"map", image},
                        {"scale", found->failure.scale},
                        {"interval", {found->failure.interval_begin, found->failure.interval_end}},
                        {"separated_pair",
                         {found->source.label(found->failure.first), found->source.label(found->failure.second)}}};
                } else {
                    report["witness"] = nullptr;
                }
            }
            out << report.dump(2) << '\n';
        } else if (*mapper) {
            funclust::FiniteMetricSpace space = load(mapper_in);
            std::vector<double> lens(space.size());
            if (!lens_base.empty()) {
                const auto base = space.index_of(lens_base);
                if (!base) {
                    throw funclust::Error("LabelMismatch", "no point labelled " + lens_base);
                }
                for (std::size_t i = 0; i < space.size(); ++i) {
                    lens[i] = space(*base, i);
                }
            } else {
                if (!mapper_in.points) {
                    throw funclust::Error("BadShape", "distance input needs --lens-base");
                }
                std::ifstream in(mapper_in.path);
                const auto cloud = funclust::read_point_csv(in);
                if (lens_axis >= cloud.cloud.dimension()) {
                    throw funclust::Error("BadShape", "lens axis " + std::to_string(lens_axis) + " out of range");
                }
                for (std::size_t i = 0; i < space.size(); ++i) {
                    lens[i] = cloud.cloud.point(i)[lens_axis];
                }
            }
            const auto [lo, hi] = std::minmax_element(lens.begin(), lens.end());
            const auto cover = funclust::uniform_cover(*lo, *hi, intervals, overlap);
            const auto graph = funclust::cover_cluster_graph(space, lens, cover, mapper_eps);
            if (format == "dot") {
                out << "graph mapper {\n";
                for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
                    const auto& node = graph.nodes[v];
                    out << "  n" << v << " [label=\"" << node.first << (node.is_overlap() ? "&" + std::to_string(node.second) : "")
                        << " (" << node.points.size() << ")\"];\n";
                }
                for (const auto& [a, b] : graph.edges) {
                    out << "  n" << a << " -- n" << b << ";\n";
                }
                out << "}\n";
            } else {
                json nodes = json::array();
                for (const auto& node : graph.nodes) {
                    json members = json::array();
                    for (const std::size_t p : node.points) {
                        members.push_back(space.label(p));
                    }
                    nodes.push_back({{"elements", {node.first, node.second}}, {"points", members}});
                }
                out << json{{"nodes", nodes}, {"edges", graph.edges}, {"components", graph.component_count()}}.dump(2)
                    << '\n';
            }
        }
    } catch (const funclust::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

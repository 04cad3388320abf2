#include <memory>

#include "common.hpp"
#include "latentlens/synth.hpp"

namespace latentlens::cli {

namespace {

struct GenerateArgs {
  std::string spec;
  std::size_t n = 0;
  std::string out;
};

struct RenderArgs {
  std::string spec;
  std::string archive;
  std::string id;
  std::string out;
};

}  // namespace

void register_synth(CLI::App& root, const Globals& g) {
  auto* synth = root.add_subcommand("synth", "Planted-factor ground-truth generator");
  synth->require_subcommand(1);

  auto gen = std::make_shared<GenerateArgs>();
  auto* generate = synth->add_subcommand("generate", "Write a planted-factor archive and ground_truth.json");
  generate->add_option("--spec", gen->spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--n", gen->n, "Pairs per factor")->required()->check(CLI::PositiveNumber);
  generate->add_option("--out", gen->out, "Output archive directory")->required();
  generate->callback([gen, &g] {
    const auto spec = synth::load_spec(gen->spec);
    const auto data = synth::generate_dataset(spec, gen->n, g.seed);
    ensure_writable(gen->out, g);
    synth::write_dataset(data, gen->out);
    info(g, "wrote " + gen->out + " (" + std::to_string(data.archive.size()) + " records, seed " +
                std::to_string(g.seed) + ")");
  });

  auto ren = std::make_shared<RenderArgs>();
  auto* render = synth->add_subcommand("render", "Render one record's code to a raster");
  render->add_option("--spec", ren->spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
  render->add_option("--archive", ren->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  render->add_option("--id", ren->id, "Record id")->required();
  render->add_option("--out", ren->out, "Raster path (a .json sidecar is written next to it)")->required();
  render->callback([ren, &g] {
    const auto spec = synth::load_spec(ren->spec);
    const auto archive = load_archive(ren->archive);
    const auto raster = synth::render(archive[archive.index_of(ren->id)].code, spec);
    ensure_writable(ren->out, g);
    ensure_writable(raster_sidecar(ren->out), g);
    write_raster(raster, ren->out);
    info(g, "wrote " + ren->out);
  });
}

}  // namespace latentlens::cli

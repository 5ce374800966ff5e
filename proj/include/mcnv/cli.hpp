#pragma once
// Command-line front end: run / sweep / verify / layer.
//
// Exit codes: 0 when everything asked for passed, 1 when a gated check
// failed or a run blew up, 2 for usage and configuration mistakes.

namespace mcnv {

int cli_main(int argc, char** argv);

}  // namespace mcnv

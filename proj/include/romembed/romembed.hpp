#pragma once

#include "medium.hpp"
#include "tridiag.hpp"
#include "forward.hpp"
#include "ratfit.hpp"
#include "rom.hpp"
#include "embed_og.hpp"
#include "embed_krein.hpp"
#include "embed_kn.hpp"
#include "passivity.hpp"
#include "io.hpp"
#include "pipeline.hpp"

#pragma once

// Umbrella header.

#include "hsi/core.hpp"
#include "hsi/corpus.hpp"
#include "hsi/fields.hpp"
#include "hsi/foliation.hpp"
#include "hsi/inequalities.hpp"
#include "hsi/isoperimetry.hpp"
#include "hsi/mesh.hpp"
#include "hsi/quadrature.hpp"
#include "hsi/report.hpp"
#include "hsi/revolution.hpp"
#include "hsi/sharpness.hpp"
#include "hsi/surface.hpp"
#include "hsi/tangential.hpp"

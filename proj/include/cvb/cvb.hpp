#pragma once

#include "cvb/basis.hpp"
#include "cvb/correspondence.hpp"
#include "cvb/csv.hpp"
#include "cvb/error.hpp"
#include "cvb/fit1d.hpp"
#include "cvb/fit2d.hpp"
#include "cvb/model_io.hpp"
#include "cvb/orthogonalize.hpp"
#include "cvb/raster.hpp"
#include "cvb/rectify.hpp"
#include "cvb/samples.hpp"
#include "cvb/synthetic.hpp"

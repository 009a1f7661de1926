use super::*;
use crate::fixtures::CAR_RENTAL;
use crate::formula::parse_expression;
use crate::model::parse_model;

fn car_plan() -> WorkbookPlan {
    plan_workbook(&parse_model(CAR_RENTAL).unwrap().model).unwrap()
}

fn text(plan: &WorkbookPlan, sheet: &str, row: u32, col: u32) -> Option<String> {
    match &plan.sheet(sheet)?.cell(row, col)?.content {
        CellContent::Text(t) => Some(t.clone()),
        CellContent::Number(v) => Some(v.to_string()),
        CellContent::Formula { text, .. } => Some(text.clone()),
    }
}

#[test]
fn three_sheets_in_order() {
    let plan = car_plan();
    let names: Vec<&str> = plan.sheets.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["Interface", "Model", "Parameters"]);
}

#[test]
fn interface_sheet() {
    let plan = car_plan();
    let grid: Vec<(u32, Option<String>, Option<String>)> = (1..=6)
        .map(|r| (r, text(&plan, "Interface", r, 1), text(&plan, "Interface", r, 2)))
        .collect();
    assert_eq!(
        grid,
        vec![
            (1, Some("Input".into()), None),
            (2, Some("Nb Days".into()), Some("12".into())),
            (3, Some("Total Distance".into()), Some("1452".into())),
            (4, None, None),
            (5, Some("Output".into()), None),
            (6, Some("Rental Cost".into()), Some("=Rental_Cost".into())),
        ]
    );
    let sheet = plan.sheet("Interface").unwrap();
    assert!(sheet.cell(1, 1).unwrap().style.bold);
    assert!(sheet.cell(2, 2).unwrap().style.bold);
    assert!(!sheet.cell(6, 2).unwrap().style.bold);
    assert_eq!(sheet.cell(6, 2).unwrap().style.format, NumberFormat::Currency(2));
    assert_eq!(plan.defined_name("Nb_Days").unwrap().to_string(), "Interface!B2");
    assert!(plan.defined_names.iter().all(|d| !(d.target.sheet == "Interface" && d.target.row == 6)));
}

#[test]
fn parameters_sheet_keeps_declaration_order() {
    let plan = car_plan();
    let rows: Vec<(String, String)> = (1..=3)
        .map(|r| (text(&plan, "Parameters", r, 1).unwrap(), text(&plan, "Parameters", r, 2).unwrap()))
        .collect();
    assert_eq!(
        rows,
        [
            ("Daily Rate".to_string(), "58".to_string()),
            ("Daily Allowance".to_string(), "100".to_string()),
            ("Distance Cost".to_string(), "0.36".to_string()),
        ]
    );
    let sheet = plan.sheet("Parameters").unwrap();
    assert!(sheet.cells.values().all(|c| c.style.bold));
    assert_eq!(sheet.cell(1, 2).unwrap().style.format, NumberFormat::Currency(2));
}

#[test]
fn parameters_sheet_matches_reference_layout_when_declared_in_that_order() {
    let src = "param Daily_Allowance = 100\nparam Distance_Cost = 0.36 format currency(2)\n\
               param Daily_Rate = 58 format currency(2)\ninput Nb_Days = 12\n\
               output Total = Nb_Days * Daily_Rate + Daily_Allowance * Distance_Cost";
    let plan = plan_workbook(&parse_model(src).unwrap().model).unwrap();
    let labels: Vec<String> = (1..=3).map(|r| text(&plan, "Parameters", r, 1).unwrap()).collect();
    assert_eq!(labels, ["Daily Allowance", "Distance Cost", "Daily Rate"]);
}

#[test]
fn model_sheet_blocks() {
    let plan = car_plan();
    let col_b: Vec<Option<String>> = (1..=20).map(|r| text(&plan, "Model", r, 2)).collect();
    let expected: Vec<Option<&str>> = vec![
        None,
        Some("=Nb_Days"),
        Some("=Daily_Rate"),
        Some("=B2*B3"),
        None,
        Some("=Nb_Days"),
        Some("=Daily_Allowance"),
        Some("=B6*B7"),
        None,
        Some("=Total_Distance"),
        Some("=Total_Allowance"),
        Some("=IF(B10>B11,B10-B11,0)"),
        None,
        Some("=Surplus_Distance"),
        Some("=Distance_Cost"),
        Some("=B14*B15"),
        None,
        Some("=Daily_Cost"),
        Some("=Surplus_Dist_Cost"),
        Some("=B18+B19"),
    ];
    assert_eq!(col_b, expected.into_iter().map(|o| o.map(String::from)).collect::<Vec<_>>());
    assert_eq!(text(&plan, "Model", 20, 1).as_deref(), Some("Rental Cost"));
    assert_eq!(plan.defined_name("Rental_Cost").unwrap().absolute(), "Model!$B$20");

    let sheet = plan.sheet("Model").unwrap();
    let def = sheet.cell(20, 2).unwrap();
    assert!(def.style.bold && def.style.top_border);
    assert!(sheet.cell(20, 1).unwrap().style.top_border);
    let reference = sheet.cell(19, 2).unwrap();
    assert!(!reference.style.bold && !reference.style.top_border);
    assert_eq!(reference.style.format, NumberFormat::Currency(2));
    assert_eq!(sheet.cell(15, 2).unwrap().style.format, NumberFormat::Currency(2));
    assert_eq!(sheet.cell(6, 2).unwrap().style.format, NumberFormat::General);
}

#[test]
fn ten_defined_names() {
    let plan = car_plan();
    assert_eq!(plan.defined_names.len(), 10);
    for dn in &plan.defined_names {
        match &plan.cell(&dn.target).unwrap().content {
            CellContent::Number(_) => assert_ne!(dn.target.sheet, "Model"),
            CellContent::Formula { text, .. } => {
                assert_eq!(dn.target.sheet, "Model");
                assert!(parse_a1(text.trim_start_matches('=')).is_none() || text.contains(|c| "+-*/(".contains(c)));
            }
            CellContent::Text(_) => panic!("{} names a label", dn.name),
        }
    }
}

fn table_for(model: &Model) -> NameMap<PlannedName> {
    let plan = plan_workbook(model).unwrap();
    plan.defined_names
        .iter()
        .map(|d| {
            let decl = model.get(&d.name).unwrap();
            (
                d.name.clone(),
                PlannedName {
                    defined: d.clone(),
                    label: decl.label.clone(),
                    format: decl.format,
                },
            )
        })
        .collect()
}

#[test]
fn block_for_surplus_distance() {
    let model = parse_model(CAR_RENTAL).unwrap().model;
    let table = table_for(&model);
    let block = plan_block(model.get("Surplus_Distance").unwrap(), 6, &table).unwrap();
    assert_eq!(block.reference_range(), 6..8);
    assert_eq!(
        block.reference_rows,
        [
            ReferenceRow {
                label: "Total Distance".into(),
                source: "Total_Distance".into()
            },
            ReferenceRow {
                label: "Total Allowance".into(),
                source: "Total_Allowance".into()
            },
        ]
    );
    assert_eq!(block.definition_row(), 8);
    assert_eq!(block.definition_formula, "=IF(B6>B7,B6-B7,0)");

    let block = plan_block(model.get("Rental_Cost").unwrap(), 18, &table).unwrap();
    assert_eq!(block.definition_row(), 20);
    assert_eq!(block.definition_formula, "=B18+B19");
}

#[test]
fn zero_reference_block() {
    let decl = VariableDecl::intermediate("Answer", parse_expression("42").unwrap());
    let block = plan_block(&decl, 2, &NameMap::new()).unwrap();
    assert!(block.reference_rows.is_empty());
    assert_eq!(block.definition_row(), 2);
    assert_eq!(block.definition_formula, "=42");
}

#[test]
fn block_with_unknown_reference() {
    let decl = VariableDecl::intermediate("X", parse_expression("Y + 1").unwrap());
    assert!(matches!(
        plan_block(&decl, 2, &NameMap::new()),
        Err(PlanError::UnresolvedReference { name, .. }) if name == "Y"
    ));
    let decl = VariableDecl::parameter("P", 1.0);
    assert!(matches!(plan_block(&decl, 2, &NameMap::new()), Err(PlanError::NotFormulaBearing(_))));
}

#[test]
fn model_without_intermediates() {
    let model = parse_model("input A = 1\nparam B = 2").unwrap().model;
    let plan = plan_workbook(&model).unwrap();
    assert!(plan.sheet("Model").unwrap().cells.is_empty());
    assert!(plan.blocks.is_empty());
    assert_eq!(plan.defined_names.len(), 2);
}

#[test]
fn empty_model_has_headers_only() {
    let plan = plan_workbook(&Model::default()).unwrap();
    assert_eq!(plan.sheets.len(), 3);
    let interface = plan.sheet("Interface").unwrap();
    assert_eq!(interface.cells.len(), 2);
    assert_eq!(text(&plan, "Interface", 3, 1).as_deref(), Some("Output"));
}

#[test]
fn invalid_model_is_refused() {
    let (model, _) = crate::model::parse_model_unchecked("var A = B\nvar B = A");
    assert!(matches!(plan_workbook(&model), Err(PlanError::InvalidModel(_))));
}

#[test]
fn submodels_get_their_own_sheets() {
    let model = parse_model(crate::fixtures::CAR_RENTAL_SPLIT).unwrap().model;
    let plan = plan_workbook(&model).unwrap();
    let names: Vec<&str> = plan.sheets.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["Interface", "Model Distance", "Model Rental", "Parameters"]);
    assert_eq!(
        plan.defined_name("Total_Distance").unwrap().absolute(),
        "'Model Distance'!$B$4"
    );
    // Surplus_Distance reads Total_Distance across sheets through its name.
    let rental = plan.sheet("Model Rental").unwrap();
    let refs: Vec<&str> = rental
        .cells
        .values()
        .filter_map(|c| match &c.content {
            CellContent::Formula { text, .. } => Some(text.as_str()),
            _ => None,
        })
        .collect();
    assert!(refs.contains(&"=Total_Distance"));
    assert_eq!(plan.defined_names.len(), model.declarations.len());
}

#[test]
fn ungrouped_variables_next_to_submodels() {
    let src = "input A = 1\nmodel Sub {\n var B = A * 2\n}\noutput Total = B + A";
    let plan = plan_workbook(&parse_model(src).unwrap().model).unwrap();
    let names: Vec<&str> = plan.sheets.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["Interface", "Model", "Model Sub", "Parameters"]);
    assert_eq!(plan.defined_name("Total").unwrap().to_string(), "Model!B4");
    assert_eq!(plan.defined_name("B").unwrap().to_string(), "'Model Sub'!B3");
}

#[test]
fn planning_is_deterministic() {
    assert_eq!(car_plan(), car_plan());
}

#[test]
fn column_widths() {
    let plan = car_plan();
    for sheet in &plan.sheets {
        assert_eq!(sheet.column_widths, [(1, 24.0), (2, 14.0)]);
    }
}

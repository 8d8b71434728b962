#include <string_view>

namespace tgs::detail {

// activity,keyword rows; duplicate phrases within an activity are kept as listed.
extern const std::string_view kDefaultKeywordsCsv;
const std::string_view kDefaultKeywordsCsv = R"csv(activity,keyword
Using Phone,texting
Using Phone,smartphone
Using Phone,phone
Using Phone,watching a video
Using Phone,social media
Using Phone,taking a picture
Using Phone,taking a photo
Using Phone,sending a message
Using Phone,writing a message
Using Phone,texting
Assembling Puzzle,assembling puzzle
Assembling Puzzle,jigsaw puzzle
Assembling Puzzle,matching pieces
Assembling Puzzle,puzzle solving
Assembling Puzzle,puzzle
Cleaning Window Screen,window cleaning
Cleaning Window Screen,squeegee
Cleaning Window Screen,wipe screen
Cleaning Window Screen,dust removal
Cleaning Window Screen,clean window
Cleaning Window Screen,glass
Cleaning Window Screen,cleaning a window
Cutting Food,cutting board
Cutting Food,knife
Cutting Food,slice
Cutting Food,chop
Cutting Food,dicing
Cutting Food,cut ingredients
Cutting Food,cutting potato
Cutting Food,cutting onion
Cutting Paper,cutting paper
Cutting Paper,scissors
Drawing,drawing
Drawing,sketching
Drawing,pen
Drawing,pencil
Drawing,illustration
Drawing,color pencil
Eating,eating
Eating,eat
Eating,meal
Eating,dining
Eating,snacking
Eating,holding a spoon
Eating,holding a fork
Eating,making a sandwich
Folding Clothes,folding clothes
Folding Clothes,laundry
Folding Clothes,fold shirts
Folding Clothes,fold pants
Folding Clothes,fold towels
Folding Clothes,organize clothes
Folding Clothes,holding clothes
Folding Clothes,sorting clothes
Folding Clothes,sorting laundry
Grating Food,grating
Grating Food,grate cheese
Grating Food,shredding
Grating Food,grater
Grating Food,grate vegetables
Inflating,inflating
Inflating,air pump
Inflating,inflate ball
Inflating,pump air
Inflating,inflate tires
Ironing Clothes,ironing clothes
Ironing Clothes,iron
Ironing Clothes,press
Ironing Clothes,steam iron
Making Coffee,making coffee
Making Coffee,brew coffee
Making Coffee,espresso
Making Coffee,coffee machine
Making Coffee,drip brew
Making Coffee,coffee preparation
Making Coffee,coffee
Making Coffee,grinding coffee
Making Eggs,making eggs
Making Eggs,fry eggs
Making Eggs,scramble eggs
Making Eggs,cook eggs
Making Eggs,omelette
Making Eggs,pan
Making Eggs,cooking
Making Eggs,holding an egg
Making Eggs,cracking an egg
Making Eggs,cracking eggs
Making Eggs,stirring eggs
Mopping Floor,mopping floor
Mopping Floor,mop
Mopping Floor,cleaning the floor
Peeling Fruit/Vegetable,peeling
Peeling Fruit/Vegetable,peel fruit
Peeling Fruit/Vegetable,peel vegetable
Peeling Fruit/Vegetable,peeler
Playing Boardgame,board game
Playing Boardgame,boardgame
Playing Boardgame,monopoly
Playing Boardgame,chess
Playing Boardgame,checkers
Playing Boardgame,dice
Playing Cards,card game
Playing Cards,cards
Playing Cards,poker
Playing Cards,shuffle
Playing Cards,playing cards
Playing Music,instrument
Playing Music,guitar
Playing Music,piano
Playing Music,violin
Playing Music,kalimba
Playing Music,marimba
Playing Video Games,video games
Playing Video Games,gaming
Playing Video Games,controller
Playing Video Games,console
Playing Video Games,playstation
Playing Video Games,xbox
Playing Video Games,nintendo
Playing Video Games,playing a video game
Reading a Book,reading
Reading a Book,read book
Reading a Book,book
Sewing,sewing
Sewing,needle
Sewing,thread
Sewing,stitch
Sewing,fabric
Sewing,hemming
Sewing,threads
Using Hammer,using hammer
Using Hammer,hammer
Using Hammer,nails
Using Hammer,hammering
Using Hammer,hammer
Using Screwdriver,screwdriver
Using Screwdriver,screws
Using Screwdriver,tighten
Using Screwdriver,unscrew
Using Screwdriver,turn screw
Using Blender,blending
Using Blender,blender
Using Blender,smoothie
Using Blender,mix ingredients
Using Computer,using computer
Using Computer,typing
Using Computer,coding
Using Computer,browsing
Using Computer,web browsing
Using Computer,laptop
Using Computer,using a computer
Using Computer,playing a video game
Using Computer,playing a game
Using Computer,using a mouse
Using Computer,working on a computer
Using Computer,holding a keyboard
Vacuuming,vacuuming
Vacuuming,vacuum cleaner
Vacuuming,clean floor
Washing Dishes,washing dishes
Washing Dishes,dish soap
Washing Dishes,scrub dishes
Washing Dishes,clean dishes
Washing Dishes,plate
Washing Dishes,bowl
Washing Dishes,sink
Washing Dishes,washing a pot
Washing Dishes,washing a mesh strainer
Washing Dishes,washing a pan
Washing Hands,washing hands
Washing Hands,soap
Wiping Countertop,wiping countertop
Wiping Countertop,wipe surface
Wiping Countertop,clean counter
Wiping Countertop,wiping
Writing,writing
Writing,write
Writing,pen
Writing,pencil
Writing,handwriting
Writing,notes
Writing,journal
)csv";

}  // namespace tgs::detail
